import type { PredictResponse } from "./types.js";

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number | null,
  ) {
    super(message);
  }
}

async function postPredict(baseUrl: string, grid: string[]): Promise<PredictResponse> {
  let response: Response;
  try {
    response = await fetch(`${baseUrl}/api/predict`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ grid }),
    });
  } catch (err) {
    throw new ApiError(`prediction service unreachable: ${err}`, null);
  }
  if (!response.ok) {
    let detail = response.statusText;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
    } catch {
      // keep the status text
    }
    throw new ApiError(detail, response.status);
  }
  return (await response.json()) as PredictResponse;
}

/** Serializes prediction requests: at most one in flight, and at most one
 * queued (a newer request replaces a waiting one). */
export class PredictClient {
  private inFlight: Promise<unknown> | null = null;
  private queued: { grid: string[]; settle: Deferred<PredictResponse> } | null = null;

  constructor(private readonly baseUrl: string = "") {}

  predict(grid: string[]): Promise<PredictResponse> {
    if (this.inFlight) {
      if (this.queued) {
        this.queued.settle.reject(new ApiError("superseded by a newer request", null));
      }
      const settle = new Deferred<PredictResponse>();
      this.queued = { grid, settle };
      return settle.promise;
    }
    return this.launch(grid);
  }

  private launch(grid: string[]): Promise<PredictResponse> {
    const run = postPredict(this.baseUrl, grid).finally(() => {
      this.inFlight = null;
      const next = this.queued;
      if (next) {
        this.queued = null;
        this.launch(next.grid).then(
          (value) => next.settle.resolve(value),
          (err) => next.settle.reject(err),
        );
      }
    });
    this.inFlight = run.catch(() => undefined);
    return run;
  }
}

class Deferred<T> {
  promise: Promise<T>;
  resolve!: (value: T) => void;
  reject!: (err: unknown) => void;

  constructor() {
    this.promise = new Promise<T>((resolve, reject) => {
      this.resolve = resolve;
      this.reject = reject;
    });
  }
}
