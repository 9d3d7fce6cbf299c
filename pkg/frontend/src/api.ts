// Typed client for the skillgpt gateway. The UI talks to the service only
// through the JSON requests defined here.

export type DocumentType = "job_description" | "user_profile";
export type ConceptType = "skill" | "occupation" | "occupation_group";
export type Language = "en" | "fr" | "nl";

export const DOCUMENT_TYPES: { value: DocumentType; label: string }[] = [
  { value: "job_description", label: "Job description" },
  { value: "user_profile", label: "User profile" },
];

export const CONCEPT_TYPES: { value: ConceptType; label: string }[] = [
  { value: "skill", label: "Skill" },
  { value: "occupation", label: "Occupation" },
  { value: "occupation_group", label: "Occupation group" },
];

export const LANGUAGES: { value: Language; label: string }[] = [
  { value: "en", label: "English" },
  { value: "fr", label: "French" },
  { value: "nl", label: "Dutch" },
];

export interface SummarizeRequest {
  document: string;
  document_type: DocumentType;
}

export interface SummarizeResponse {
  skills: string[];
  raw_output: string;
}

export interface StandardizeRequest {
  document?: string;
  skills?: string[];
  document_type: DocumentType;
  concept_type: ConceptType;
  language: Language;
  k?: number;
  mode?: "aggregate" | "per_skill";
}

export interface Hit {
  uri: string;
  label: string;
  score: number;
}

export interface StandardizeResponse {
  skills: string[];
  hits: Hit[];
  per_skill_hits?: Record<string, Hit[]>;
}

export interface GatewayErrorBody {
  code: string;
  message: string;
  stage?: string;
}

export class GatewayError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly stage?: string,
  ) {
    super(message);
    this.name = "GatewayError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class GatewayClient {
  private readonly baseUrl: string;

  constructor(
    baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {
    this.baseUrl = baseUrl.replace(/\/+$/, "");
  }

  async summarize(request: SummarizeRequest): Promise<SummarizeResponse> {
    return this.post("/v1/summarize", request);
  }

  async standardize(request: StandardizeRequest): Promise<StandardizeResponse> {
    return this.post("/v1/standardize", request);
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(this.baseUrl + path, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
      });
    } catch (cause) {
      throw new GatewayError("unreachable", `cannot reach gateway at ${this.baseUrl}`);
    }
    if (!response.ok) {
      let parsed: { error?: GatewayErrorBody } | undefined;
      try {
        parsed = await response.json();
      } catch {
        parsed = undefined;
      }
      const error = parsed?.error;
      if (error?.code && error?.message) {
        throw new GatewayError(error.code, error.message, error.stage);
      }
      throw new GatewayError("http_error", `gateway returned HTTP ${response.status}`);
    }
    return (await response.json()) as T;
  }
}
