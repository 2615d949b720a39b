/** Thin typed client for the governance HTTP API.
 *
 * The fetch implementation is injectable so tests can run against a fake
 * transport. Domain failures surface as ApiError with the server's stable
 * error code; transport failures surface as ConnectivityError so the UI can
 * show a connectivity banner instead of a crash.
 */

import type {
  AlertDto, AssetDto, AuditEventDto, BoardFeed, CardDto, DeploymentDto,
  GateReviewDto, Meta,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
    readonly details: Record<string, unknown> = {},
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class ConnectivityError extends Error {
  constructor(readonly cause: unknown) {
    super("API unreachable");
    this.name = "ConnectivityError";
  }
}

export class ApiClient {
  principal: string | null = null;

  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  actAs(principal: string | null): void {
    this.principal = principal;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.principal) headers["X-Principal"] = this.principal;
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, {
        method,
        headers,
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (cause) {
      throw new ConnectivityError(cause);
    }
    if (!response.ok) {
      let code = "HttpError";
      let message = `HTTP ${response.status}`;
      let details: Record<string, unknown> = {};
      try {
        const doc = (await response.json()) as Record<string, unknown>;
        if (typeof doc.code === "string") code = doc.code;
        if (typeof doc.message === "string") message = doc.message;
        else if (doc.detail !== undefined) message = JSON.stringify(doc.detail);
        if (typeof doc.details === "object" && doc.details !== null) {
          details = doc.details as Record<string, unknown>;
        }
      } catch {
        // non-JSON error body; keep the HTTP status text
      }
      throw new ApiError(code, message, response.status, details);
    }
    return (await response.json()) as T;
  }

  meta(): Promise<Meta> {
    return this.request("GET", "/meta");
  }

  board(): Promise<BoardFeed> {
    return this.request("GET", "/board");
  }

  asset(assetId: string): Promise<AssetDto> {
    return this.request("GET", `/assets/${assetId}`);
  }

  listCards(assetId: string, kind: string): Promise<CardDto[]> {
    return this.request("GET", `/assets/${assetId}/cards/${kind}`);
  }

  createCard(assetId: string, kind: string, fields: Record<string, string>): Promise<CardDto> {
    return this.request("POST", `/assets/${assetId}/cards`, { kind, fields });
  }

  reviseCard(assetId: string, kind: string, fields: Record<string, string>): Promise<CardDto> {
    return this.request("PUT", `/assets/${assetId}/cards/${kind}`, { fields });
  }

  approveCard(assetId: string, kind: string, rationale: string): Promise<CardDto> {
    return this.request("POST", `/assets/${assetId}/cards/${kind}/approve`, { rationale });
  }

  bindRole(assetId: string, principalId: string, role: string): Promise<unknown> {
    return this.request("POST", `/assets/${assetId}/roles`, {
      principal_id: principalId, role,
    });
  }

  openGate(assetId: string, gate: string): Promise<GateReviewDto> {
    return this.request("POST", `/assets/${assetId}/gates/${gate}/open`);
  }

  getReview(reviewId: string): Promise<GateReviewDto> {
    return this.request("GET", `/gates/${reviewId}`);
  }

  recordCheck(
    reviewId: string, itemId: string, result: string, evidenceRefs: string[] = [],
  ): Promise<GateReviewDto> {
    return this.request("POST", `/gates/${reviewId}/checks`, {
      item_id: itemId, result, evidence_refs: evidenceRefs,
    });
  }

  decideGate(reviewId: string, verdict: string, rationale: string): Promise<GateReviewDto> {
    return this.request("POST", `/gates/${reviewId}/decision`, { verdict, rationale });
  }

  gateStatus(assetId: string, gate: string): Promise<Record<string, unknown>> {
    return this.request("GET", `/assets/${assetId}/gates/${gate}`);
  }

  listDeployments(assetId: string): Promise<DeploymentDto[]> {
    return this.request("GET", `/assets/${assetId}/deployments`);
  }

  transitionDeployment(
    deploymentId: string, target: string, approvalRef?: string,
  ): Promise<DeploymentDto> {
    const body: Record<string, unknown> = { target };
    if (approvalRef !== undefined) body.approval_ref = approvalRef;
    return this.request("POST", `/deployments/${deploymentId}/transition`, body);
  }

  alerts(assetId: string): Promise<AlertDto[]> {
    return this.request("GET", `/assets/${assetId}/alerts`);
  }

  audit(assetId: string): Promise<AuditEventDto[]> {
    return this.request("GET", `/assets/${assetId}/audit`);
  }

  auditVerify(assetId: string): Promise<{ result: string; first_bad_seq?: number }> {
    return this.request("GET", `/assets/${assetId}/audit/verify`);
  }
}
