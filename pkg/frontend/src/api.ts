/** Typed client for the genderalt HTTP service. */

export type Gender = "M" | "F";
export type Label = Gender | "A";

export interface EntityInfo {
  i: number;
  g: Label;
}

export interface RecordSummary {
  id: number;
  src: string[];
  entities: EntityInfo[];
  num_structures: number;
}

export type TargetSegment = string | { m: string[]; f: string[] };

export interface RecordDetail {
  id: number;
  src: string[];
  entities: EntityInfo[];
  tgt: TargetSegment[];
  align: number[];
  aligned_heads: number[];
}

export interface DeriveResponse {
  tokens: string[];
  text: string;
}

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

async function toError(resp: Response): Promise<ApiError> {
  let detail = `${resp.status} ${resp.statusText}`;
  try {
    const body = await resp.json();
    if (typeof body.detail === "string") detail = body.detail;
  } catch {
    /* non-JSON error body: keep the status text */
  }
  return new ApiError(resp.status, detail);
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private async get<T>(path: string): Promise<T> {
    const resp = await fetch(this.baseUrl + path);
    if (!resp.ok) throw await toError(resp);
    return resp.json() as Promise<T>;
  }

  listRecords(): Promise<RecordSummary[]> {
    return this.get("/records");
  }

  getRecord(id: number): Promise<RecordDetail> {
    return this.get(`/records/${id}`);
  }

  async derive(
    id: number,
    assignment: Record<string, Gender>,
  ): Promise<DeriveResponse> {
    const resp = await fetch(this.baseUrl + "/derive", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ id, assignment }),
    });
    if (!resp.ok) throw await toError(resp);
    return resp.json() as Promise<DeriveResponse>;
  }
}
