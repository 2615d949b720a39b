/** Schema-driven card editor with a field-level revision diff.
 *
 * The form schema (sections per card kind, designated earliest stage) comes
 * from the API's /meta document, so the editor disables itself with a stage
 * hint instead of letting the server bounce an early creation.
 */

import { ApiClient } from "./api.js";
import type { CardDto, Meta } from "./types.js";

export interface CardEditor {
  kind: string;
  enabled: boolean;
  stageHint: string | null;
  sections: string[];
  fields: Record<string, string>;
}

function stageOrdinal(meta: Meta, roman: string): number {
  const found = meta.stages.find((s) => s.stage === roman);
  if (!found) throw new Error(`unknown stage ${roman}`);
  return found.ordinal;
}

export function editorFor(
  meta: Meta, kind: string, assetStage: string, existing?: CardDto,
): CardEditor {
  const schema = meta.card_kinds.find((k) => k.kind === kind);
  if (!schema) throw new Error(`unknown card kind ${kind}`);
  const designated = stageOrdinal(meta, schema.designated_stage);
  const current = stageOrdinal(meta, assetStage);
  const enabled = current >= designated;
  const fields: Record<string, string> = {};
  for (const section of schema.sections) {
    fields[section] = existing?.fields[section] ?? "";
  }
  return {
    kind,
    enabled,
    stageHint: enabled
      ? null
      : `${kind} cards become available at stage ${schema.designated_stage}`,
    sections: [...schema.sections],
    fields,
  };
}

export async function saveRevision(
  client: ApiClient, assetId: string, kind: string,
  editor: CardEditor, hasExisting: boolean,
): Promise<CardDto> {
  if (!editor.enabled) {
    throw new Error(editor.stageHint ?? "editor disabled");
  }
  return hasExisting
    ? client.reviseCard(assetId, kind, editor.fields)
    : client.createCard(assetId, kind, editor.fields);
}

export type FieldChangeKind = "added" | "removed" | "changed";

export interface FieldChange {
  field: string;
  kind: FieldChangeKind;
  before: string | null;
  after: string | null;
}

/** Field-level differences between two revisions of the same card. */
export function diffRevisions(older: CardDto, newer: CardDto): FieldChange[] {
  const changes: FieldChange[] = [];
  const fields = new Set([...Object.keys(older.fields), ...Object.keys(newer.fields)]);
  for (const field of [...fields].sort()) {
    const before = field in older.fields ? older.fields[field] : null;
    const after = field in newer.fields ? newer.fields[field] : null;
    if (before === after) continue;
    const kind: FieldChangeKind =
      before === null ? "added" : after === null ? "removed" : "changed";
    changes.push({ field, kind, before, after });
  }
  return changes;
}
