/**
 * Interactive terminal phone. Connect to a running core
 * (`consentgate serve --port 8765`) and drive it with the keyboard:
 *
 *   1..9  press and hold the numbered soft button
 *   r     release inside (confirm)
 *   s     slide out, then release (abort)
 *   f     fingerprint scan
 *   c     power + volume-down chord (system screenshot)
 *   b/h/d switch world: benign / hijack / background-attack demo
 *   q     quit
 */

import { BridgeClient } from "./client";
import { render, toAnsi } from "./screen";
import { Snapshot } from "./protocol";

const host = process.env.BRIDGE_HOST ?? "127.0.0.1";
const port = Number(process.env.BRIDGE_PORT ?? process.argv[2] ?? 8765);

const client = new BridgeClient();

function draw(snap: Snapshot): void {
  const screen = render(snap);
  process.stdout.write("\x1b[2J\x1b[H");
  process.stdout.write(toAnsi(screen) + "\n");
  process.stdout.write(
    ` world=${snap.world} rev=${snap.revision} t=${snap.t_ms}ms\n`,
  );
  const recent = snap.recent_log.slice(-4);
  for (const e of recent) {
    process.stdout.write(
      `   ${e.seq} ${e.category} ${e.app_id} ${e.op ?? "-"} ${e.detail}\n`,
    );
  }
  process.stdout.write(
    " keys: 1-9 hold button, r release, s slide-out, f fingerprint, c chord, b/h/d world, q quit\n",
  );
}

async function main(): Promise<void> {
  await client.connect(host, port);
  client.onSnapshot(draw);
  client.onError((e) => process.stderr.write(`error: ${e.error}\n`));

  process.stdin.setRawMode?.(true);
  process.stdin.resume();
  process.stdin.setEncoding("utf-8");
  process.stdin.on("data", (key: string) => {
    if (key === "q" || key === "") {
      client.close();
      process.exit(0);
    } else if (key >= "1" && key <= "9") {
      const snap = client.latest;
      const buttons = snap?.foreground_app?.buttons ?? [];
      const b = buttons[Number(key) - 1];
      if (b) client.pointer("down", b.button_id);
    } else if (key === "r") {
      client.pointer("up");
    } else if (key === "s") {
      client.pointer("move", undefined, false);
      client.pointer("up");
    } else if (key === "f") {
      client.fingerprint();
    } else if (key === "c") {
      client.chord();
    } else if (key === "b") {
      client.selectScenario("interactive");
    } else if (key === "h") {
      client.selectScenario("interactive_hijack");
    } else if (key === "d") {
      client.selectScenario("rat_demo");
    }
  });
}

main().catch((err) => {
  process.stderr.write(`cannot connect to ${host}:${port}: ${err}\n`);
  process.exit(1);
});
