/** Wire types for the governance HTTP API. */

export interface BoardColumn {
  stage: string;
  ordinal: number;
  name: string;
  phase: string;
  color: string;
  gate: string | null;
}

export interface AssetTile {
  asset_id: string;
  name: string;
  stage: string;
  ordinal: number;
  phase: string;
  status: string;
  update_cycle: number;
  gates: Record<string, string>;
  open_alerts: number;
}

export interface BoardFeed {
  columns: BoardColumn[];
  assets: AssetTile[];
}

export interface ChecklistItemDto {
  item_id: string;
  description: string;
  mandatory: boolean;
  result: string;
  evidence_refs: string[];
  checked_by: string | null;
}

export interface ApprovalDto {
  principal: string;
  role: string;
  verdict: string;
  rationale: string;
  timestamp: string;
}

export interface GateReviewDto {
  review_id: string;
  asset_id: string;
  gate: string;
  stage: string;
  cycle: number;
  decision: string;
  consumed: boolean;
  items: ChecklistItemDto[];
  approvals: ApprovalDto[];
}

export interface CardDto {
  asset_id: string;
  kind: string;
  revision: number;
  author: string;
  status: string;
  approver: string | null;
  approval_rationale: string | null;
  content_hash: string;
  fields: Record<string, string>;
  [extra: string]: unknown;
}

export interface DeploymentDto {
  deployment_id: string;
  asset_id: string;
  model_card_revision: number;
  deployment_card_revision: number;
  state: string;
  canary_fraction: number;
  predecessor: string | null;
  authorizing_review_id: string;
  update_cycle: number;
  allowed_transitions: string[];
}

export interface AlertDto {
  alert_id: string;
  asset_id: string;
  deployment_id: string;
  rule_id: string;
  metric_name: string;
  status: string;
  observed: number;
}

export interface AuditEventDto {
  seq: number;
  actor: string;
  action: string;
  timestamp: string;
  hash: string;
}

export interface MetaStage {
  stage: string;
  ordinal: number;
  name: string;
  phase: string;
  color: string;
  gate: string | null;
}

export interface MetaCardKind {
  kind: string;
  designated_stage: string;
  sections: string[];
}

export interface Meta {
  stages: MetaStage[];
  card_kinds: MetaCardKind[];
  gates: Record<string, { stage: string; checklist: unknown[] }>;
  roles: string[];
  deployment_edges: Record<string, string[]>;
}

export interface AssetDto {
  asset_id: string;
  name: string;
  current_stage: string;
  status: string;
  update_cycle: number;
  allowed_actions?: Array<{ action: string; [extra: string]: unknown }>;
  [extra: string]: unknown;
}
