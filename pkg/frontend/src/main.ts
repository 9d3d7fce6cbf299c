// DOM wiring: renders the session state and forwards user actions to the
// controller. Kept deliberately thin; the workflow rules live in session.ts.

import {
  CONCEPT_TYPES,
  ConceptType,
  DOCUMENT_TYPES,
  DocumentType,
  GatewayClient,
  LANGUAGES,
  Language,
} from "./api.js";
import { SessionController, UiSession, formatScore } from "./session.js";

declare global {
  interface Window {
    __SKILLGPT_BASE_URL__?: string;
  }
}

function byId<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (!element) throw new Error(`missing element #${id}`);
  return element as T;
}

function fillSelect(
  select: HTMLSelectElement,
  options: { value: string; label: string }[],
): void {
  for (const option of options) {
    const node = document.createElement("option");
    node.value = option.value;
    node.textContent = option.label;
    select.appendChild(node);
  }
}

function init(): void {
  const serverInput = byId<HTMLInputElement>("server-url");
  const documentText = byId<HTMLTextAreaElement>("document-text");
  const documentType = byId<HTMLSelectElement>("document-type");
  const conceptType = byId<HTMLSelectElement>("concept-type");
  const language = byId<HTMLSelectElement>("language");
  const kInput = byId<HTMLInputElement>("top-k");
  const summarizeButton = byId<HTMLButtonElement>("summarize-btn");
  const standardizeButton = byId<HTMLButtonElement>("standardize-btn");
  const skillsList = byId<HTMLUListElement>("skills-list");
  const newSkillInput = byId<HTMLInputElement>("new-skill");
  const addSkillButton = byId<HTMLButtonElement>("add-skill-btn");
  const resultsBody = byId<HTMLTableSectionElement>("results-body");
  const errorBanner = byId<HTMLDivElement>("error-banner");
  const busyIndicator = byId<HTMLSpanElement>("busy-indicator");

  fillSelect(documentType, DOCUMENT_TYPES);
  fillSelect(conceptType, CONCEPT_TYPES);
  fillSelect(language, LANGUAGES);
  serverInput.value = window.__SKILLGPT_BASE_URL__ ?? "http://127.0.0.1:8080";

  let controller: SessionController;

  function render(session: UiSession): void {
    const busy = session.busyStage !== "idle";
    summarizeButton.disabled = !controller.canSummarize;
    standardizeButton.disabled = !controller.canStandardize;
    documentType.disabled = busy;
    conceptType.disabled = busy;
    language.disabled = busy;
    addSkillButton.disabled = busy;
    busyIndicator.textContent =
      session.busyStage === "summarizing"
        ? "Summarizing…"
        : session.busyStage === "standardizing"
          ? "Standardizing…"
          : "";

    if (session.lastError) {
      const stage = session.lastError.stage ? ` (${session.lastError.stage})` : "";
      errorBanner.textContent = `${session.lastError.code}${stage}: ${session.lastError.message}`;
      errorBanner.hidden = false;
    } else {
      errorBanner.hidden = true;
    }

    renderSkills(session);
    renderResults(session);
  }

  function renderSkills(session: UiSession): void {
    skillsList.innerHTML = "";
    session.extractedSkills.forEach((skill, index) => {
      const item = document.createElement("li");
      const input = document.createElement("input");
      input.type = "text";
      input.value = skill;
      input.disabled = session.busyStage !== "idle";
      input.addEventListener("change", () => controller.editSkill(index, input.value));
      const remove = document.createElement("button");
      remove.textContent = "×";
      remove.title = "Remove skill";
      remove.disabled = session.busyStage !== "idle";
      remove.addEventListener("click", () => controller.removeSkill(index));
      item.appendChild(input);
      item.appendChild(remove);
      skillsList.appendChild(item);
    });
  }

  function renderResults(session: UiSession): void {
    resultsBody.innerHTML = "";
    session.results.forEach((hit, index) => {
      const row = document.createElement("tr");

      const rank = document.createElement("td");
      rank.textContent = String(index + 1);

      const label = document.createElement("td");
      const link = document.createElement("a");
      link.href = hit.uri;
      link.target = "_blank";
      link.rel = "noopener noreferrer";
      link.textContent = hit.label;
      label.appendChild(link);

      const score = document.createElement("td");
      score.textContent = formatScore(hit.score);

      row.appendChild(rank);
      row.appendChild(label);
      row.appendChild(score);
      resultsBody.appendChild(row);
    });
  }

  function connect(baseUrl: string): void {
    controller = new SessionController(new GatewayClient(baseUrl));
    controller.subscribe(render);
    render(controller.state);
  }

  connect(serverInput.value);
  serverInput.addEventListener("change", () => connect(serverInput.value));

  documentText.addEventListener("input", () =>
    controller.setDocumentText(documentText.value),
  );
  documentType.addEventListener("change", () =>
    controller.setDocumentType(documentType.value as DocumentType),
  );
  conceptType.addEventListener("change", () =>
    controller.setConceptType(conceptType.value as ConceptType),
  );
  language.addEventListener("change", () =>
    controller.setLanguage(language.value as Language),
  );
  kInput.addEventListener("change", () => controller.setK(Number(kInput.value)));
  summarizeButton.addEventListener("click", () => void controller.summarize());
  standardizeButton.addEventListener("click", () => void controller.standardize());
  addSkillButton.addEventListener("click", () => {
    controller.addSkill(newSkillInput.value);
    newSkillInput.value = "";
  });
}

init();
