// Typed client for the annotation service. All errors surface as
// ServiceError carrying the {code, message} pair the API returns.

import type {
  AnnotateRequest,
  AnnotateResponse,
  BionicRequest,
  BionicResponse,
  HealthResponse,
  JobRecord,
} from "./types.js";

export class ServiceError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ServiceError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  jobUrl(jobId: string): string {
    return `${this.baseUrl}/api/jobs/${jobId}`;
  }

  async annotate(request: AnnotateRequest): Promise<AnnotateResponse> {
    return this.post<AnnotateResponse>("/api/annotate", request);
  }

  async bionic(request: BionicRequest): Promise<BionicResponse> {
    return this.post<BionicResponse>("/api/bionic", request);
  }

  async getJob(jobId: string): Promise<JobRecord> {
    return this.get<JobRecord>(`/api/jobs/${jobId}`);
  }

  async health(): Promise<HealthResponse> {
    return this.get<HealthResponse>("/health");
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      });
    } catch (error) {
      throw new ServiceError(0, "unreachable", `service unreachable: ${String(error)}`);
    }
    return this.decode<T>(response);
  }

  private async get<T>(path: string): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`);
    } catch (error) {
      throw new ServiceError(0, "unreachable", `service unreachable: ${String(error)}`);
    }
    return this.decode<T>(response);
  }

  private async decode<T>(response: Response): Promise<T> {
    if (response.ok) {
      return (await response.json()) as T;
    }
    let code = "error";
    let message = `HTTP ${response.status}`;
    try {
      const body = (await response.json()) as { code?: string; message?: string };
      if (body.code) code = body.code;
      if (body.message) message = body.message;
    } catch {
      // non-JSON error body; keep the generic message
    }
    throw new ServiceError(response.status, code, message);
  }
}
