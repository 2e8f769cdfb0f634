/** Minimal JSON client for the layout service.
 *
 * The fetch implementation is injected so tests can drive it with plain
 * promises. Layout requests carry a monotonically increasing id; when a
 * response lands after a newer request has been issued it is reported as
 * stale and must not reach the view.
 */

import type { LayoutPayload } from "./types.js";

export interface LayoutRequestBody {
  af: string;
  format?: "apx" | "iccma23" | "tgf";
  extension?: string[];
  semantics?: "grounded";
  mode?: "heuristic" | "exact" | "both";
  rec?: boolean;
  timeout_ms?: number;
  strategy?: "A" | "B";
  seed?: number;
  name?: string;
}

export interface InstanceSummary {
  id: string;
  format: string;
  arguments: number;
  attacks: number;
  has_extension: boolean;
}

export interface InstanceDetail {
  id: string;
  format: string;
  af: string;
  extension: string[] | null;
}

export type LayoutResult =
  | { kind: "ok"; payload: LayoutPayload }
  | { kind: "error"; code: string; message: string }
  | { kind: "stale" };

export interface MinimalResponse {
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<MinimalResponse>;

interface ErrorBody {
  error?: { code?: string; message?: string };
}

export class LayoutClient {
  private latest = 0;

  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike,
  ) {}

  /** POST a layout request; only the newest in-flight call may apply. */
  async requestLayout(body: LayoutRequestBody): Promise<LayoutResult> {
    const id = ++this.latest;
    let status: number;
    let data: unknown;
    try {
      const response = await this.fetchFn(`${this.baseUrl}/api/layout`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      });
      status = response.status;
      data = await response.json();
    } catch (err) {
      if (id !== this.latest) {
        return { kind: "stale" };
      }
      return { kind: "error", code: "NETWORK", message: String(err) };
    }
    if (id !== this.latest) {
      return { kind: "stale" };
    }
    if (status !== 200) {
      const detail = (data as ErrorBody).error ?? {};
      return {
        kind: "error",
        code: detail.code ?? "UNKNOWN",
        message: detail.message ?? `request failed with HTTP ${status}`,
      };
    }
    return { kind: "ok", payload: data as LayoutPayload };
  }

  async listInstances(): Promise<InstanceSummary[]> {
    const response = await this.fetchFn(`${this.baseUrl}/api/instances`);
    if (response.status !== 200) {
      throw new Error(`instance listing failed with HTTP ${response.status}`);
    }
    const data = (await response.json()) as { instances: InstanceSummary[] };
    return data.instances;
  }

  async fetchInstance(id: string): Promise<InstanceDetail> {
    const response = await this.fetchFn(
      `${this.baseUrl}/api/instances/${encodeURIComponent(id)}`,
    );
    if (response.status !== 200) {
      throw new Error(`instance ${id} not found (HTTP ${response.status})`);
    }
    return (await response.json()) as InstanceDetail;
  }
}
