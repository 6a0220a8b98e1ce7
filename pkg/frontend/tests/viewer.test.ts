import { readFileSync } from "node:fs";
import { join, dirname } from "node:path";
import { fileURLToPath } from "node:url";
import { beforeEach, describe, expect, it } from "vitest";

import { createApp, App } from "../src/app.js";
import { BundleError, parseBundle, ViewerBundle } from "../src/bundle.js";
import { Player } from "../src/player.js";
import { sampleIndexForPhase } from "../src/state.js";

const here = dirname(fileURLToPath(import.meta.url));
const FIXTURE = JSON.parse(
  readFileSync(join(here, "data", "fixture.viewer.json"), "utf-8"),
);

function makeApp(): { app: App; bundle: ViewerBundle } {
  const bundle = parseBundle(FIXTURE);
  document.body.innerHTML = "";
  const root = document.createElement("div");
  document.body.appendChild(root);
  const app = createApp(root, bundle, { autoTimer: false });
  return { app, bundle };
}

describe("page-level loading", () => {
  beforeEach(() => {
    document.body.innerHTML = '<div id="gdaf-root"></div>';
  });

  it("shows a banner and builds no controls for a corrupted file", async () => {
    const { loadText } = await import("../src/main.js");
    loadText("{not json");
    const bannerNode = document.getElementById("gdaf-banner")!;
    expect(bannerNode.classList.contains("hidden")).toBe(false);
    expect(document.querySelectorAll(".speed-stop").length).toBe(0);

    loadText(JSON.stringify({ format: "wrong" }));
    expect(bannerNode.classList.contains("hidden")).toBe(false);
    expect(document.querySelectorAll(".joint-item").length).toBe(0);
  });

  it("keeps the previous app intact when a later load is malformed", async () => {
    const { loadText } = await import("../src/main.js");
    loadText(JSON.stringify(FIXTURE));
    const stops = document.querySelectorAll(".speed-stop").length;
    expect(stops).toBeGreaterThan(0);
    loadText("###");
    expect(document.getElementById("gdaf-banner")!.classList.contains("hidden")).toBe(false);
    expect(document.querySelectorAll(".speed-stop").length).toBe(stops);
  });
});

describe("bundle parsing", () => {
  it("accepts the exported fixture bundle", () => {
    const bundle = parseBundle(FIXTURE);
    expect(bundle.entities.human.channels.length).toBe(15);
    expect(bundle.entities.human.speeds_mps).toEqual([0.5, 0.75, 1.0, 1.25, 1.5]);
    expect(bundle.entities.human.n_samples).toBe(101);
  });

  it("rejects malformed documents with a clear error", () => {
    expect(() => parseBundle({ format: "something-else" })).toThrow(BundleError);
    expect(() => parseBundle({ format: "gdaf-viewer-bundle" })).toThrow(BundleError);
    const broken = JSON.parse(JSON.stringify(FIXTURE));
    broken.entities.human.pos_deg[0][0] = [1, 2, 3]; // wrong sample count
    expect(() => parseBundle(broken)).toThrow(BundleError);
  });
});

describe("speed slider", () => {
  it("has one annotated stop per speed", () => {
    const { app, bundle } = makeApp();
    const stops = app.dom.speedLabels.querySelectorAll(".speed-stop");
    expect(stops.length).toBe(bundle.entities.human.speeds_mps.length);
    expect(stops[0].textContent).toBe("0.5 m/s");
    expect(stops[stops.length - 1].textContent).toBe("1.5 m/s");
    expect(Number(app.dom.speedSlider.max)).toBe(stops.length - 1);
  });

  it("degenerates to a single stop for a one-speed bundle", () => {
    const single = JSON.parse(JSON.stringify(FIXTURE));
    for (const entity of ["human", "robot"]) {
      const e = single.entities[entity];
      e.speeds_mps = [e.speeds_mps[0]];
      for (const key of ["pos_deg", "torque_nmkg", "power_wkg"]) {
        e[key] = e[key].map((row: number[][]) => [row[0]]);
      }
      e.cycle_duration_s = e.cycle_duration_s ? [e.cycle_duration_s[0]] : null;
    }
    document.body.innerHTML = "";
    const root = document.createElement("div");
    document.body.appendChild(root);
    const app = createApp(root, parseBundle(single), { autoTimer: false });
    expect(app.dom.speedLabels.querySelectorAll(".speed-stop").length).toBe(1);
  });

  it("changing speed while stopped re-plots and re-poses immediately", () => {
    const { app, bundle } = makeApp();
    app.setPhase(0.4);
    const before = app.plotModels[0].series;
    app.dom.speedSlider.value = "2";
    app.dom.speedSlider.dispatchEvent(new Event("input"));
    expect(app.state.speedIndex).toBe(2);
    expect(app.plotModels[0].series).not.toEqual(before);
    expect(app.plotModels[0].series).toEqual(
      bundle.entities.human.pos_deg[app.state.selectedJoint][2],
    );
    expect(app.state.phase).toBe(0.4); // pose refreshed at the same phase
  });
});

describe("phase scrubbing", () => {
  it("places the cursor at 25% on all three plots and poses from the nearest sample", () => {
    const { app, bundle } = makeApp();
    app.dom.phaseSlider.value = "0.25";
    app.dom.phaseSlider.dispatchEvent(new Event("input"));
    expect(app.plotModels.length).toBe(3);
    for (const model of app.plotModels) {
      expect(model.cursorPhase).toBe(0.25);
    }
    const n = bundle.entities.human.n_samples;
    const expected = Math.round(0.25 * (n - 1));
    expect(app.lastPoseSample).toBe(expected);
    const joint = bundle.entities.human.channels.indexOf("knee_l");
    expect(app.lastDriveAngles.get("knee_l")).toBe(
      bundle.entities.human.pos_deg[joint][app.state.speedIndex][expected],
    );
  });

  it("clamps input to [0, 1]", () => {
    const { app } = makeApp();
    app.setPhase(3.7);
    expect(app.state.phase).toBe(1);
    app.setPhase(-2);
    expect(app.state.phase).toBe(0);
  });

  it("poses identically at phase 0 and 1 when cycle endpoints coincide", () => {
    const { app, bundle } = makeApp();
    // fixture cycles are closed (sample 0 == sample N-1)
    app.setPhase(0);
    const pose0 = new Map(app.lastDriveAngles);
    app.setPhase(1);
    for (const [name, angle] of app.lastDriveAngles) {
      expect(angle).toBe(pose0.get(name));
    }
    expect(app.lastPoseSample).toBe(bundle.entities.human.n_samples - 1);
  });

  it("uses the midpoint value of a linear ramp at phase 0.5", () => {
    const ramp = JSON.parse(JSON.stringify(FIXTURE));
    const n = ramp.entities.human.n_samples;
    const joint = ramp.entities.human.channels.indexOf("knee_l");
    ramp.entities.human.pos_deg[joint][0] = Array.from(
      { length: n },
      (_, k) => (10 * k) / (n - 1),
    );
    document.body.innerHTML = "";
    const root = document.createElement("div");
    document.body.appendChild(root);
    const app = createApp(root, parseBundle(ramp), { autoTimer: false });
    app.selectJoint(joint);
    app.setPhase(0.5);
    expect(app.lastDriveAngles.get("knee_l")).toBeCloseTo(5.0, 10);
  });
});

describe("drive mode", () => {
  it("selected_only moves exactly one joint", () => {
    const { app, bundle } = makeApp();
    const joint = bundle.entities.human.channels.indexOf("knee_l");
    app.selectJoint(joint);
    app.toggleDriveMode();
    expect(app.state.driveMode).toBe("selected_only");

    app.setPhase(0);
    const rest = new Map(app.lastDriveAngles);
    app.setPhase(0.6);
    let movedCount = 0;
    for (const [name, angle] of app.lastDriveAngles) {
      if (angle !== rest.get(name)) movedCount += 1;
      if (name !== "knee_l") {
        // everything else held at its 0% pose
        expect(angle).toBe(
          bundle.entities.human.pos_deg[
            bundle.entities.human.channels.indexOf(name)
          ][app.state.speedIndex][0],
        );
      }
    }
    expect(movedCount).toBe(1);
    expect(app.lastDriveAngles.get("knee_l")).toBe(
      bundle.entities.human.pos_deg[joint][app.state.speedIndex][
        sampleIndexForPhase(0.6, bundle.entities.human.n_samples)
      ],
    );
  });

  it("toggles back to all_joints", () => {
    const { app } = makeApp();
    app.toggleDriveMode();
    app.toggleDriveMode();
    expect(app.state.driveMode).toBe("all_joints");
    expect(app.dom.driveButton.textContent).toBe("Drive: all joints");
  });
});

describe("playback", () => {
  it("disables the phase slider while playing and freezes phase on stop", () => {
    const { app } = makeApp();
    app.setPhase(0.3);
    app.dom.startButton.click();
    expect(app.state.playing).toBe(true);
    expect(app.dom.phaseSlider.disabled).toBe(true);

    app.stepFrame(200); // 0.1 of the default 2 s period
    expect(app.state.phase).toBeCloseTo(0.4, 10);

    // manual scrubbing is ignored while playing
    app.setPhase(0.9);
    expect(app.state.phase).toBeCloseTo(0.4, 10);

    app.dom.stopButton.click();
    expect(app.state.playing).toBe(false);
    expect(app.dom.phaseSlider.disabled).toBe(false);
    expect(Number(app.dom.phaseSlider.value)).toBeCloseTo(0.4, 10);
  });

  it("one full loop visits all N samples in order", () => {
    const { app, bundle } = makeApp();
    const n = bundle.entities.human.n_samples;
    app.start();
    const dt = app.player.periodMs / (n - 1);
    const visited: number[] = [app.lastPoseSample];
    for (let k = 1; k < n; k++) {
      app.stepFrame(dt);
      visited.push(app.lastPoseSample);
    }
    expect(visited).toEqual(Array.from({ length: n }, (_, k) => k));
  });

  it("wraps around and keeps cycling", () => {
    const player = new Player(1000);
    let phase = 0.95;
    phase = player.step(phase, 100); // +0.1 -> 1.05 -> wraps to 0.05
    expect(phase).toBeCloseTo(0.05, 10);
  });

  it("loop period is adjustable", () => {
    const { app } = makeApp();
    app.dom.periodInput.value = "4";
    app.dom.periodInput.dispatchEvent(new Event("input"));
    expect(app.player.periodMs).toBe(4000);
  });

  it("other controls stay responsive during playback", () => {
    const { app } = makeApp();
    app.start();
    app.stepFrame(100);
    app.dom.speedSlider.value = "1";
    app.dom.speedSlider.dispatchEvent(new Event("input"));
    expect(app.state.speedIndex).toBe(1);
    app.toggleDriveMode();
    expect(app.state.driveMode).toBe("selected_only");
    expect(app.dom.startButton.disabled).toBe(true);
    expect(app.dom.stopButton.disabled).toBe(false);
  });
});

describe("joint selection and sources", () => {
  it("lists every joint indexed and named", () => {
    const { app, bundle } = makeApp();
    const items = app.dom.jointList.querySelectorAll(".joint-item");
    expect(items.length).toBe(bundle.entities.human.channels.length);
    expect(items[0].textContent).toBe("0: pelvis_tilt");
  });

  it("plots exactly the bundle data for the selected cell", () => {
    const { app, bundle } = makeApp();
    const joint = bundle.entities.human.channels.indexOf("ankle_r");
    const items = app.dom.jointList.querySelectorAll<HTMLLIElement>(".joint-item");
    items[joint].click();
    expect(app.state.selectedJoint).toBe(joint);
    const speed = app.state.speedIndex;
    expect(app.plotModels[0].series).toEqual(
      bundle.entities.human.pos_deg[joint][speed],
    );
    expect(app.plotModels[1].series).toEqual(
      bundle.entities.human.torque_nmkg[joint][speed],
    );
    expect(app.plotModels[2].series).toEqual(
      bundle.entities.human.power_wkg[joint][speed],
    );
  });

  it("selecting the same joint twice is a no-op", () => {
    const { app } = makeApp();
    app.selectJoint(3);
    const models = app.plotModels;
    app.selectJoint(3);
    expect(app.plotModels).toBe(models); // no re-render happened
  });

  it("switching source while stopped re-plots without changing phase", () => {
    const { app, bundle } = makeApp();
    app.setPhase(0.42);
    const robotRadio = app.dom.sourceRadios.find((r) => r.value === "robot")!;
    robotRadio.checked = true;
    robotRadio.dispatchEvent(new Event("change"));
    expect(app.state.source).toBe("robot");
    expect(app.state.phase).toBe(0.42);
    expect(app.plotModels[0].series).toEqual(
      bundle.entities.robot.pos_deg[app.state.selectedJoint][app.state.speedIndex],
    );
  });

  it("never mutates bundle data", () => {
    const { app, bundle } = makeApp();
    const snapshot = JSON.stringify(bundle.entities.human.pos_deg[0][0]);
    app.setPhase(0.5);
    app.toggleDriveMode();
    app.start();
    app.stepFrame(333);
    app.stop();
    app.selectJoint(5);
    expect(JSON.stringify(bundle.entities.human.pos_deg[0][0])).toBe(snapshot);
  });
});
