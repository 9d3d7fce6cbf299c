// Headless session state and actions. The DOM layer subscribes to this
// controller and renders; all gateway traffic and workflow rules live here
// so they can be tested without a browser.

import {
  ConceptType,
  DocumentType,
  GatewayClient,
  GatewayError,
  GatewayErrorBody,
  Hit,
  Language,
  StandardizeRequest,
} from "./api.js";

export type BusyStage = "idle" | "summarizing" | "standardizing";

export interface UiSession {
  documentText: string;
  documentType: DocumentType;
  conceptType: ConceptType;
  language: Language;
  k: number;
  extractedSkills: string[];
  rawSummary: string | null;
  results: Hit[];
  busyStage: BusyStage;
  lastError: GatewayErrorBody | null;
}

export const DEFAULT_K = 10;

function initialSession(): UiSession {
  return {
    documentText: "",
    documentType: "job_description",
    conceptType: "skill",
    language: "en",
    k: DEFAULT_K,
    extractedSkills: [],
    rawSummary: null,
    results: [],
    busyStage: "idle",
    lastError: null,
  };
}

export class SessionController {
  private session: UiSession = initialSession();
  private listeners: Array<(session: UiSession) => void> = [];

  constructor(private readonly client: GatewayClient) {}

  get state(): UiSession {
    return this.session;
  }

  subscribe(listener: (session: UiSession) => void): void {
    this.listeners.push(listener);
  }

  private update(patch: Partial<UiSession>): void {
    this.session = { ...this.session, ...patch };
    for (const listener of this.listeners) {
      listener(this.session);
    }
  }

  setDocumentText(text: string): void {
    this.update({ documentText: text });
  }

  setDocumentType(documentType: DocumentType): void {
    this.update({ documentType });
  }

  setConceptType(conceptType: ConceptType): void {
    this.update({ conceptType });
  }

  setLanguage(language: Language): void {
    this.update({ language });
  }

  setK(k: number): void {
    if (Number.isInteger(k) && k >= 1) {
      this.update({ k });
    }
  }

  editSkill(index: number, value: string): void {
    const skills = [...this.session.extractedSkills];
    if (index < 0 || index >= skills.length) return;
    skills[index] = value;
    this.update({ extractedSkills: skills });
  }

  addSkill(value: string): void {
    const trimmed = value.trim();
    if (!trimmed) return;
    this.update({ extractedSkills: [...this.session.extractedSkills, trimmed] });
  }

  removeSkill(index: number): void {
    const skills = this.session.extractedSkills.filter((_, i) => i !== index);
    this.update({ extractedSkills: skills });
  }

  get canSummarize(): boolean {
    return this.session.busyStage === "idle" && this.session.documentText.trim() !== "";
  }

  get canStandardize(): boolean {
    return (
      this.session.busyStage === "idle" &&
      (this.usableSkills().length > 0 || this.session.documentText.trim() !== "")
    );
  }

  private usableSkills(): string[] {
    return this.session.extractedSkills.filter((skill) => skill.trim() !== "");
  }

  // Extract skills from the pasted document. Replaces the editable skill
  // list on success; on failure keeps the previous skills and results.
  async summarize(): Promise<void> {
    if (!this.canSummarize) return;
    this.update({ busyStage: "summarizing", lastError: null });
    try {
      const response = await this.client.summarize({
        document: this.session.documentText,
        document_type: this.session.documentType,
      });
      this.update({
        extractedSkills: response.skills,
        rawSummary: response.raw_output,
        busyStage: "idle",
      });
    } catch (error) {
      this.update({ busyStage: "idle", lastError: toErrorBody(error) });
    }
  }

  // Map the edited skills (or, with an empty list, the raw document) onto
  // taxonomy concepts. Results replace the table; errors keep it.
  async standardize(): Promise<void> {
    if (!this.canStandardize) return;
    const skills = this.usableSkills();
    const request: StandardizeRequest = {
      document_type: this.session.documentType,
      concept_type: this.session.conceptType,
      language: this.session.language,
      k: this.session.k,
    };
    if (skills.length > 0) {
      request.skills = skills;
    } else {
      request.document = this.session.documentText;
    }
    this.update({ busyStage: "standardizing", lastError: null });
    try {
      const response = await this.client.standardize(request);
      this.update({ results: response.hits, busyStage: "idle" });
    } catch (error) {
      this.update({ busyStage: "idle", lastError: toErrorBody(error) });
    }
  }
}

function toErrorBody(error: unknown): GatewayErrorBody {
  if (error instanceof GatewayError) {
    return { code: error.code, message: error.message, stage: error.stage };
  }
  return { code: "unexpected", message: String(error) };
}

export function formatScore(score: number): string {
  return score.toFixed(4);
}
