/**
 * Phone-screen renderer with hard trusted-path separation.
 *
 * The status-bar region is composed exclusively from snapshot.status_bar,
 * the system-owned channel. App-controlled strings (button labels) are
 * rendered only inside the activity-window region, so a spoofed label can
 * never migrate into the bar: if the label and the bar disagree, the user
 * is looking at a hijack attempt.
 */

import { Snapshot } from "./protocol";

export interface ScreenRegion {
  id: string;
  lines: string[];
}

export interface Screen {
  statusBar: ScreenRegion;
  activityWindow: ScreenRegion;
  navigationBar: ScreenRegion;
  logBadges: { blocked: number; denied: number; authorized: number };
  soundEvents: number;
  revision: number;
}

function statusBarLines(snap: Snapshot): string[] {
  const bar = snap.status_bar;
  if (!bar.visible) {
    return ["(status bar hidden: " + bar.screen_mode + ")"];
  }
  const cur = bar.current;
  const left = cur === null ? "" : `[${cur.kind}] ${cur.text}`;
  const extra =
    bar.rotation.length > 1 ? ` (+${bar.rotation.length - 1} more)` : "";
  return [left === "" ? "• no security messages" : left + extra];
}

function activityLines(snap: Snapshot): string[] {
  const app = snap.foreground_app;
  if (app === null) {
    return ["(no foreground app)"];
  }
  const lines = [`${app.display_name}  (${app.app_id})`];
  app.buttons.forEach((b, i) => {
    const hold = b.confirm_mode === "HoldToSustain" ? " [hold]" : "";
    lines.push(`  (${i + 1}) [ ${b.label_text} ]${hold}`);
  });
  return lines;
}

export function render(snap: Snapshot): Screen {
  return {
    statusBar: { id: "status-bar", lines: statusBarLines(snap) },
    activityWindow: { id: "activity-window", lines: activityLines(snap) },
    navigationBar: {
      id: "navigation-bar",
      lines: ["◁   ○   □"],
    },
    logBadges: {
      blocked: snap.counts.blocked,
      denied: snap.counts.denied,
      authorized: snap.counts.authorized,
    },
    soundEvents: snap.sound_events,
    revision: snap.revision,
  };
}

function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** DOM rendering: one element per region, ids mirror the region names. */
export function toHtml(screen: Screen): string {
  const region = (r: ScreenRegion) =>
    `<div id="${r.id}">` +
    r.lines.map((l) => `<span>${escapeHtml(l)}</span>`).join("") +
    `</div>`;
  const badges =
    `<div id="log-badges">` +
    `blocked=${screen.logBadges.blocked} ` +
    `denied=${screen.logBadges.denied} ` +
    `authorized=${screen.logBadges.authorized}` +
    `</div>`;
  return (
    `<div id="phone" data-revision="${screen.revision}">` +
    region(screen.statusBar) +
    region(screen.activityWindow) +
    region(screen.navigationBar) +
    badges +
    `</div>`
  );
}

/** Extract one region's inner text from rendered HTML (test helper). */
export function regionText(html: string, regionId: string): string {
  const match = html.match(
    new RegExp(`<div id="${regionId}">([\\s\\S]*?)</div>`),
  );
  return match ? match[1] : "";
}

const BAR_STYLE = "\x1b[7m"; // inverse video: the reserved strip
const RESET = "\x1b[0m";

export function toAnsi(screen: Screen): string {
  const width = 46;
  const pad = (s: string) => (s.length > width ? s.slice(0, width) : s.padEnd(width));
  const out: string[] = [];
  out.push("┌" + "─".repeat(width) + "┐");
  for (const l of screen.statusBar.lines) {
    out.push("│" + BAR_STYLE + pad(l) + RESET + "│");
  }
  out.push("├" + "─".repeat(width) + "┤");
  for (const l of screen.activityWindow.lines) {
    out.push("│" + pad(l) + "│");
  }
  out.push("├" + "─".repeat(width) + "┤");
  for (const l of screen.navigationBar.lines) {
    out.push("│" + pad(l) + "│");
  }
  out.push("└" + "─".repeat(width) + "┘");
  out.push(
    ` logs: blocked=${screen.logBadges.blocked} denied=${screen.logBadges.denied}` +
      ` authorized=${screen.logBadges.authorized}  sounds=${screen.soundEvents}`,
  );
  return out.join("\n");
}
