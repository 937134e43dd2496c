// Payload shapes of the annotation service JSON API.

export type AnnotationTag = "strong" | "mark" | "u";

export type Mode = "default" | "custom" | "offline";

export interface SpanJson {
  kind: AnnotationTag;
  start: number;
  end: number;
}

export interface DocumentJson {
  text: string;
  spans: SpanJson[];
  paragraph_breaks: number[];
}

export interface DiffJson {
  original: string;
  produced: string;
  position: number;
}

export interface ReportJson {
  passed: boolean;
  diffs: DiffJson[];
}

export interface CategoryJson {
  description: string;
  tag: AnnotationTag;
}

export interface AnnotateRequest {
  text: string;
  mode: Mode;
  categories?: CategoryJson[];
  temperature?: number;
  max_output_tokens?: number;
}

export interface AnnotateResponse {
  document: DocumentJson;
  report: ReportJson;
  html: string;
  status: "succeeded" | "fallback_used";
  job_id: string;
}

export interface BionicRequest {
  text: string;
  fixation?: number;
  saccade?: number;
}

export interface BionicResponse {
  document: DocumentJson;
  html: string;
  status: string;
  job_id: string;
}

export interface JobRecord {
  id: string;
  created_at: string;
  kind: "annotate" | "bionic" | "score";
  request: unknown;
  result: AnnotateResponse | BionicResponse | Record<string, unknown>;
  status: string;
}

export interface HealthResponse {
  status: string;
  version: string;
}
