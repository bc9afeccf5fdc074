/** Typed client for the review service JSON surface. */

export interface Candidate {
  label: string;
  asset: string;
}

export interface TaskPayload {
  done: boolean;
  imageId?: string;
  original?: string;
  candidates?: Candidate[];
  remaining?: number;
}

export interface RankingAck {
  ok: boolean;
  remaining: number;
}

export interface ConcordancePayload {
  comparablePairs: number;
  droppedPairs: number;
  perMetric: Record<string, number>;
  ranking: string[];
}

/** Server-rejected request; `detail` carries the server's message verbatim. */
export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`${status}: ${detail}`);
    this.name = "ApiError";
  }
}

async function rejectionDetail(res: Response): Promise<string> {
  try {
    const body = (await res.json()) as { detail?: unknown };
    if (typeof body.detail === "string") return body.detail;
    return JSON.stringify(body);
  } catch {
    return res.statusText || `HTTP ${res.status}`;
  }
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  async fetchTask(annotatorId: string): Promise<TaskPayload> {
    const res = await fetch(`${this.base}/api/task?annotator=${encodeURIComponent(annotatorId)}`);
    if (!res.ok) throw new ApiError(res.status, await rejectionDetail(res));
    return (await res.json()) as TaskPayload;
  }

  async submitRanking(
    annotatorId: string,
    imageId: string,
    ordering: readonly string[],
  ): Promise<RankingAck> {
    const res = await fetch(`${this.base}/api/ranking`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ annotatorId, imageId, ordering }),
    });
    if (!res.ok) throw new ApiError(res.status, await rejectionDetail(res));
    return (await res.json()) as RankingAck;
  }

  assetUrl(handle: string): string {
    return `${this.base}/api/asset/${handle}`;
  }

  async concordance(): Promise<ConcordancePayload> {
    const res = await fetch(`${this.base}/api/concordance`);
    if (!res.ok) throw new ApiError(res.status, await rejectionDetail(res));
    return (await res.json()) as ConcordancePayload;
  }
}
