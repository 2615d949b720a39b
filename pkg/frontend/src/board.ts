/** Board view model: 11 fixed stage columns grouped by phase.
 *
 * Colors follow the lifecycle legend (ideation light blue, development dark
 * blue, operation mint, retirement black) and gate badges are always yellow.
 * The layout is fixed: an empty system still renders all 11 columns.
 */

import { ApiClient, ConnectivityError } from "./api.js";
import type { AssetTile, BoardFeed } from "./types.js";

export const GATE_BADGE_COLOR = "yellow";

export interface GateBadge {
  gate: string;
  state: string;
  label: string;
  color: string;
}

export interface TileView {
  assetId: string;
  name: string;
  status: string;
  updateCycle: number;
  openAlerts: number;
  gateBadges: GateBadge[];
}

export interface ColumnView {
  stage: string;
  ordinal: number;
  name: string;
  phase: string;
  color: string;
  gateBadge: { gate: string; color: string } | null;
  tiles: TileView[];
}

export interface BoardView {
  columns: ColumnView[];
}

function badgeLabel(state: string): string {
  switch (state) {
    case "RequiresReapproval":
      return "re-approval";
    case "Open":
      return "in review";
    default:
      return state.toLowerCase();
  }
}

function tileView(tile: AssetTile): TileView {
  return {
    assetId: tile.asset_id,
    name: tile.name,
    status: tile.status,
    updateCycle: tile.update_cycle,
    openAlerts: tile.open_alerts,
    gateBadges: Object.entries(tile.gates).map(([gate, state]) => ({
      gate,
      state,
      label: badgeLabel(state),
      color: GATE_BADGE_COLOR,
    })),
  };
}

export function renderBoard(feed: BoardFeed): BoardView {
  if (feed.columns.length !== 11) {
    throw new Error(`board feed must carry 11 columns, got ${feed.columns.length}`);
  }
  const columns: ColumnView[] = feed.columns.map((col) => ({
    stage: col.stage,
    ordinal: col.ordinal,
    name: col.name,
    phase: col.phase,
    color: col.color,
    gateBadge: col.gate ? { gate: col.gate, color: GATE_BADGE_COLOR } : null,
    tiles: [],
  }));
  const byOrdinal = new Map(columns.map((c) => [c.ordinal, c]));
  for (const tile of feed.assets) {
    const column = byOrdinal.get(tile.ordinal);
    if (!column) throw new Error(`asset ${tile.asset_id} has no column ${tile.ordinal}`);
    column.tiles.push(tileView(tile));
  }
  return { columns };
}

export type BoardLoad =
  | { kind: "board"; board: BoardView }
  | { kind: "banner"; banner: string };

/** Poll target for the board screen: a view or a connectivity banner. */
export async function loadBoard(client: ApiClient): Promise<BoardLoad> {
  try {
    return { kind: "board", board: renderBoard(await client.board()) };
  } catch (error) {
    if (error instanceof ConnectivityError) {
      return { kind: "banner", banner: "API unreachable, retrying" };
    }
    throw error;
  }
}
