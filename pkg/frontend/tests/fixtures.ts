/** Shared fixtures and a canned-response fetch for the unit tests. */

import type { FetchLike } from "../src/api.js";
import type {
  BoardFeed, CardDto, DeploymentDto, GateReviewDto, Meta,
} from "../src/types.js";

export function jsonResponse(doc: unknown, status = 200): Response {
  return new Response(JSON.stringify(doc), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export interface RecordedRequest {
  url: string;
  method: string;
  headers: Record<string, string>;
  body: unknown;
}

/** A fetch double that replays queued responses and records every request. */
export function cannedFetch(responses: Response[]): {
  fetchImpl: FetchLike;
  requests: RecordedRequest[];
} {
  const requests: RecordedRequest[] = [];
  const queue = [...responses];
  const fetchImpl: FetchLike = async (url, init) => {
    requests.push({
      url,
      method: init?.method ?? "GET",
      headers: (init?.headers as Record<string, string>) ?? {},
      body: typeof init?.body === "string" ? JSON.parse(init.body) : undefined,
    });
    const next = queue.shift();
    if (!next) throw new Error(`no canned response for ${url}`);
    return next;
  };
  return { fetchImpl, requests };
}

const PHASES: Array<[string, string, number[]]> = [
  ["Ideation", "lightblue", [1, 2, 3]],
  ["Development", "darkblue", [4, 5, 6, 7]],
  ["Operation", "mint", [8, 9, 10]],
  ["Retirement", "black", [11]],
];

const ROMAN = ["", "I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X", "XI"];
const GATE_AT: Record<number, string> = { 3: "G1", 7: "G2", 10: "G3" };

export function boardFeed(assets: BoardFeed["assets"] = []): BoardFeed {
  const columns = [];
  for (const [phase, color, ordinals] of PHASES) {
    for (const ordinal of ordinals) {
      columns.push({
        stage: ROMAN[ordinal],
        ordinal,
        name: `Stage ${ROMAN[ordinal]}`,
        phase,
        color,
        gate: GATE_AT[ordinal] ?? null,
      });
    }
  }
  return { columns, assets };
}

export function metaDoc(): Meta {
  return {
    stages: boardFeed().columns.map((c) => ({ ...c })),
    card_kinds: [
      { kind: "UseCase", designated_stage: "III",
        sections: ["business_goal", "stakeholders", "cpps_boundaries",
                   "data_availability_summary", "risks"] },
      { kind: "Dataset", designated_stage: "IV",
        sections: ["sources", "collection_context", "preprocessing",
                   "quality_metrics", "limits"] },
      { kind: "Model", designated_stage: "V",
        sections: ["intended_use", "training_data_ref", "evaluation_metrics",
                   "limits", "risks"] },
      { kind: "Deployment", designated_stage: "IX",
        sections: ["target_environment", "rollout_strategy", "monitoring_plan",
                   "rollback_plan", "risks"] },
    ],
    gates: {},
    roles: [],
    deployment_edges: {
      Registered: ["Staged"],
      Staged: ["Canary"],
      Canary: ["Full", "RolledBack"],
      Full: ["Retired", "RolledBack"],
      RolledBack: [],
      Retired: [],
    },
  };
}

export function reviewDto(overrides: Partial<GateReviewDto> = {}): GateReviewDto {
  return {
    review_id: "demo:G1:1",
    asset_id: "demo",
    gate: "G1",
    stage: "III",
    cycle: 1,
    decision: "Open",
    consumed: false,
    items: [
      { item_id: "business-alignment", description: "aligned", mandatory: true,
        result: "Pass", evidence_refs: [], checked_by: "qi" },
      { item_id: "data-availability", description: "data there", mandatory: true,
        result: "Pending", evidence_refs: [], checked_by: null },
    ],
    approvals: [],
    ...overrides,
  };
}

export function cardDto(overrides: Partial<CardDto> = {}): CardDto {
  return {
    asset_id: "demo",
    kind: "Model",
    revision: 1,
    author: "ds",
    created_at: "2026-04-01T00:00:00+00:00",
    status: "Approved",
    approver: "pm",
    approval_rationale: "fine",
    content_hash: "0".repeat(64),
    fields: {
      intended_use: "defect detection",
      training_data_ref: "Dataset@1",
      evaluation_metrics: "F1 0.90",
      limits: "daylight only",
      risks: "lighting drift",
    },
    ...overrides,
  };
}

export function deploymentDto(overrides: Partial<DeploymentDto> = {}): DeploymentDto {
  return {
    deployment_id: "demo:dep-2",
    asset_id: "demo",
    model_card_revision: 2,
    deployment_card_revision: 2,
    state: "Canary",
    canary_fraction: 0.1,
    predecessor: "demo:dep-1",
    authorizing_review_id: "demo:G3:1",
    update_cycle: 1,
    allowed_transitions: ["Full", "RolledBack"],
    ...overrides,
  };
}
