// @vitest-environment node
// Executes a compiled self-contained bundle (built runtime inlined) in a
// fresh headless DOM: the inline script must boot on its own and expose
// the state hook.

import { readFileSync, existsSync } from "node:fs";
import { resolve } from "node:path";
import { JSDOM } from "jsdom";
import { describe, expect, it } from "vitest";

const FIXTURE = resolve(process.cwd(), "tests", "fixtures", "teaser_live.html");

function bootLive(): Promise<JSDOM> {
  const html = readFileSync(FIXTURE, "utf-8");
  const dom = new JSDOM(html, { runScripts: "dangerously" });
  return new Promise((done) => {
    const poll = () => {
      if ((dom.window as unknown as Record<string, unknown>).visdslState) {
        done(dom);
      } else {
        setTimeout(poll, 5);
      }
    };
    poll();
  });
}

describe.skipIf(!existsSync(FIXTURE))("self-contained bundle", () => {
  it("boots, renders both views and reports the realized defaults", async () => {
    const dom = await bootLive();
    const hook = (dom.window as unknown as Record<string, any>).visdslState;
    const state = hook();
    expect(Object.keys(state.views)).toEqual(["volume_streamline", "histogram"]);
    expect(state.views.histogram.layers["histogram:histogram#0"].bins).toBe(30);
    expect(state.views.volume_streamline.palette).toBe("viridis");
    const bars = dom.window.document.querySelectorAll(".visdsl-hist-bar");
    expect(bars.length).toBe(30);
    // No external fetches possible: every absolute URL in the document is
    // an XML namespace identifier, never a resource reference.
    const urls = dom.serialize().match(/https?:\/\/[^"'\s)]+/g) ?? [];
    expect(urls.every((u) => u.startsWith("http://www.w3.org/"))).toBe(true);
  });
});
