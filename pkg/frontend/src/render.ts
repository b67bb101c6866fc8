// Scene description for the workspace canvas: one rectangle per paper on a
// time axis (solutions placed by score, arguments in the argumentation lane
// below the dashed divider), one link per citation edge, a star on the
// team's final analysis paper.

import type { WorkspaceViewModel } from "./types.js";

export const CANVAS = { width: 900, height: 520 };
const MARGIN_X = 50;
const SCORE_TOP = 40; // score 1.0
const SCORE_BOTTOM = 360; // score 0.0
export const DIVIDER_Y = 395;
const ARGUMENT_LANE_Y = 440;
const RECT_W = 96;
const RECT_H = 30;

export interface SceneRect {
  paper: string;
  title: string;
  kind: "solution" | "argument";
  score?: number;
  x: number;
  y: number;
  width: number;
  height: number;
  selected: boolean;
  cited: boolean;
  citing: boolean;
}

export interface SceneLink {
  from: string; // citing paper
  to: string; // cited paper
}

export interface Scene {
  rects: SceneRect[];
  links: SceneLink[];
  stars: string[]; // paper ids drawn with the final-analysis star
  dividerY: number;
}

export function renderWorkspace(vm: WorkspaceViewModel): Scene {
  const points = new Map(vm.trajectory.map((p) => [p.paper, p]));
  const times = vm.trajectory.map((p) => p.t);
  const tMin = times.length ? Math.min(...times) : 0;
  const tMax = times.length ? Math.max(...times) : 1;
  const span = tMax - tMin || 1;
  const usable = CANVAS.width - 2 * MARGIN_X - RECT_W;

  const rects: SceneRect[] = [];
  const links: SceneLink[] = [];
  const stars: string[] = [];

  for (const paper of vm.papers) {
    const point = points.get(paper.id);
    const t = point ? point.t : 0;
    const x = MARGIN_X + ((t - tMin) / span) * usable;
    const y =
      paper.kind === "solution"
        ? SCORE_BOTTOM - (point ? point.score : 0) * (SCORE_BOTTOM - SCORE_TOP) - RECT_H / 2
        : ARGUMENT_LANE_Y - RECT_H / 2;
    rects.push({
      paper: paper.id,
      title: paper.title,
      kind: paper.kind,
      score: paper.score,
      x,
      y,
      width: RECT_W,
      height: RECT_H,
      selected: vm.selection === paper.id,
      cited: paper.citedBy.length > 0,
      citing: paper.cites.length > 0,
    });
    for (const cited of paper.cites) {
      links.push({ from: paper.id, to: cited });
    }
    if (paper.isFinal) {
      stars.push(paper.id);
    }
  }
  return { rects, links, stars, dividerY: DIVIDER_Y };
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const STAR_PATH = "0,-9 2.6,-2.8 9,-2.8 3.9,1.3 6.1,8 0,4 -6.1,8 -3.9,1.3 -9,-2.8 -2.6,-2.8";

/** SVG markup for a scene; the browser shell injects this into the page. */
export function sceneToSvg(scene: Scene): string {
  const byId = new Map(scene.rects.map((r) => [r.paper, r]));
  const parts: string[] = [];
  parts.push(
    `<line x1="0" y1="${scene.dividerY}" x2="${CANVAS.width}" y2="${scene.dividerY}" ` +
      'stroke="#999" stroke-dasharray="6 4" class="mode-divider"/>',
  );
  for (const link of scene.links) {
    const from = byId.get(link.from);
    const to = byId.get(link.to);
    if (!from || !to) continue;
    parts.push(
      `<line class="citation-link" data-from="${link.from}" data-to="${link.to}" ` +
        `x1="${from.x + from.width / 2}" y1="${from.y + from.height / 2}" ` +
        `x2="${to.x + to.width / 2}" y2="${to.y + to.height / 2}" stroke="#7a9" />`,
    );
  }
  for (const rect of scene.rects) {
    const classes = ["paper-rect", rect.kind];
    if (rect.selected) classes.push("selected");
    if (rect.cited) classes.push("cited");
    if (rect.citing) classes.push("citing");
    parts.push(
      `<g class="${classes.join(" ")}" data-paper="${rect.paper}">` +
        `<rect x="${rect.x}" y="${rect.y}" width="${rect.width}" height="${rect.height}" rx="4"/>` +
        `<text x="${rect.x + 6}" y="${rect.y + 19}">${escapeXml(truncate(rect.title))}</text>` +
        (rect.score !== undefined
          ? `<text class="score" x="${rect.x + rect.width - 6}" y="${rect.y - 4}" text-anchor="end">` +
            `${rect.score.toFixed(3)}</text>`
          : "") +
        "</g>",
    );
  }
  for (const paperId of scene.stars) {
    const rect = byId.get(paperId);
    if (!rect) continue;
    const cx = rect.x + rect.width / 2;
    const cy = rect.y - 12;
    parts.push(
      `<polygon class="final-star" data-paper="${paperId}" ` +
        `points="${STAR_PATH}" transform="translate(${cx},${cy})" fill="#e9b81e"/>`,
    );
  }
  return parts.join("");
}

function truncate(title: string, max = 14): string {
  return title.length > max ? `${title.slice(0, max - 1)}…` : title;
}
