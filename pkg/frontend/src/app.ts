/** DOM application: split interface with the animated figure and transport
 * controls on the left, speed/joint selectors in the middle and the three
 * synchronized plots on the right. All rendering derives from one
 * ViewerState; the phase slider is the only control disabled while
 * playback runs.
 */

import { Source, ViewerBundle, entityData } from "./bundle.js";
import { FigurePose, figurePose, renderFigure } from "./figure.js";
import { Player } from "./player.js";
import { PlotModel, buildPlotModels, renderPlot } from "./plots.js";
import {
  ViewerState,
  driveAngles,
  initialState,
  sampleIndexForPhase,
  selectJoint as selectJointState,
  setPhase as setPhaseState,
  setSource as setSourceState,
  setSpeedIndex as setSpeedIndexState,
  startPlayback,
  stopPlayback,
  toggleDriveMode as toggleDriveModeState,
} from "./state.js";

export interface AppDom {
  root: HTMLElement;
  figureCanvas: HTMLCanvasElement;
  plotCanvases: HTMLCanvasElement[];
  speedSlider: HTMLInputElement;
  speedLabels: HTMLElement;
  jointList: HTMLUListElement;
  phaseSlider: HTMLInputElement;
  startButton: HTMLButtonElement;
  stopButton: HTMLButtonElement;
  driveButton: HTMLButtonElement;
  periodInput: HTMLInputElement;
  sourceRadios: HTMLInputElement[];
}

export interface App {
  bundle: ViewerBundle;
  state: ViewerState;
  plotModels: PlotModel[];
  lastPose: FigurePose;
  lastDriveAngles: Map<string, number>;
  lastPoseSample: number;
  player: Player;
  dom: AppDom;
  setPhase(phase: number): void;
  selectJoint(index: number): void;
  setSource(source: Source): void;
  setSpeedIndex(index: number): void;
  start(): void;
  stop(): void;
  toggleDriveMode(): void;
  stepFrame(dtMs: number): void;
  destroy(): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function buildDom(root: HTMLElement): AppDom {
  root.innerHTML = "";
  const panes = el("div", "gdaf-panes");

  // left: figure + transport
  const left = el("div", "pane pane-left");
  const figureCanvas = el("canvas", "figure-canvas");
  figureCanvas.width = 320;
  figureCanvas.height = 360;
  const transport = el("div", "transport");
  const startButton = el("button", "btn-start", "Start");
  const stopButton = el("button", "btn-stop", "Stop");
  const driveButton = el("button", "btn-drive", "Drive: all joints");
  const periodLabel = el("label", "period-label", "Cycle period (s) ");
  const periodInput = el("input", "period-input");
  periodInput.type = "number";
  periodInput.min = "0.2";
  periodInput.step = "0.1";
  periodInput.value = "2";
  periodLabel.appendChild(periodInput);
  transport.append(startButton, stopButton, driveButton, periodLabel);

  const phaseBox = el("div", "phase-box");
  phaseBox.append(el("span", "phase-title", "Gait phase"));
  const phaseSlider = el("input", "phase-slider");
  phaseSlider.type = "range";
  phaseSlider.min = "0";
  phaseSlider.max = "1";
  phaseSlider.step = "0.001";
  phaseSlider.value = "0";
  phaseBox.appendChild(phaseSlider);

  const sourceBox = el("div", "source-box");
  const sourceRadios: HTMLInputElement[] = [];
  for (const source of ["human", "robot"] as const) {
    const label = el("label", "source-option");
    const radio = el("input");
    radio.type = "radio";
    radio.name = "gdaf-source";
    radio.value = source;
    if (source === "human") radio.checked = true;
    label.append(radio, document.createTextNode(` ${source}`));
    sourceBox.appendChild(label);
    sourceRadios.push(radio);
  }

  left.append(figureCanvas, transport, phaseBox, sourceBox);

  // middle: vertical speed slider with annotated stops + joint list
  const middle = el("div", "pane pane-middle");
  const speedBox = el("div", "speed-box");
  speedBox.appendChild(el("span", "speed-title", "Speed"));
  const speedSlider = el("input", "speed-slider");
  speedSlider.type = "range";
  speedSlider.min = "0";
  speedSlider.step = "1";
  speedSlider.value = "0";
  speedSlider.setAttribute("orient", "vertical");
  const speedLabels = el("div", "speed-labels");
  speedBox.append(speedSlider, speedLabels);
  const jointList = el("ul", "joint-list");
  middle.append(speedBox, jointList);

  // right: three stacked synchronized plots
  const right = el("div", "pane pane-right");
  const plotCanvases: HTMLCanvasElement[] = [];
  for (const name of ["angle", "torque", "power"]) {
    const canvas = el("canvas", `plot-canvas plot-${name}`);
    canvas.width = 460;
    canvas.height = 150;
    plotCanvases.push(canvas);
    right.appendChild(canvas);
  }

  panes.append(left, middle, right);
  root.appendChild(panes);

  return {
    root,
    figureCanvas,
    plotCanvases,
    speedSlider,
    speedLabels,
    jointList,
    phaseSlider,
    startButton,
    stopButton,
    driveButton,
    periodInput,
    sourceRadios,
  };
}

export function createApp(
  root: HTMLElement,
  bundle: ViewerBundle,
  opts: { autoTimer?: boolean } = {},
): App {
  const dom = buildDom(root);
  const player = new Player(2000);
  let timer: ReturnType<typeof setInterval> | null = null;

  const app: App = {
    bundle,
    state: initialState(),
    plotModels: [],
    lastPose: figurePose(new Map()),
    lastDriveAngles: new Map(),
    lastPoseSample: 0,
    player,
    dom,

    setPhase(phase: number) {
      if (app.state.playing) return; // slider only drives the phase when stopped
      app.state = setPhaseState(app.state, phase);
      render();
    },
    selectJoint(index: number) {
      if (index === app.state.selectedJoint) return;
      app.state = selectJointState(app.state, bundle, index);
      render();
    },
    setSource(source: Source) {
      if (source === app.state.source) return;
      app.state = setSourceState(app.state, bundle, source); // phase untouched
      rebuildSelectors();
      render();
    },
    setSpeedIndex(index: number) {
      app.state = setSpeedIndexState(app.state, bundle, index);
      render();
    },
    start() {
      app.state = startPlayback(app.state);
      render();
    },
    stop() {
      app.state = stopPlayback(app.state); // freezes the current phase
      render();
    },
    toggleDriveMode() {
      app.state = toggleDriveModeState(app.state);
      render();
    },
    stepFrame(dtMs: number) {
      if (!app.state.playing) return;
      app.state = { ...app.state, phase: player.step(app.state.phase, dtMs) };
      render();
    },
    destroy() {
      if (timer !== null) clearInterval(timer);
      root.innerHTML = "";
    },
  };

  function rebuildSelectors() {
    const entity = entityData(bundle, app.state.source);
    dom.speedSlider.max = String(entity.speeds_mps.length - 1);
    dom.speedSlider.value = String(app.state.speedIndex);
    dom.speedLabels.innerHTML = "";
    entity.speeds_mps.forEach((speed, i) => {
      const stop = el("div", "speed-stop", `${speed} m/s`);
      stop.dataset.index = String(i);
      dom.speedLabels.appendChild(stop);
    });
    dom.jointList.innerHTML = "";
    entity.channels.forEach((name, i) => {
      const item = el("li", "joint-item", `${i}: ${name}`);
      item.dataset.index = String(i);
      item.addEventListener("click", () => app.selectJoint(i));
      dom.jointList.appendChild(item);
    });
  }

  function render() {
    const entity = entityData(bundle, app.state.source);

    app.plotModels = buildPlotModels(bundle, app.state);
    app.plotModels.forEach((model, i) => renderPlot(dom.plotCanvases[i], model));

    app.lastDriveAngles = driveAngles(bundle, app.state);
    app.lastPoseSample = sampleIndexForPhase(app.state.phase, entity.n_samples);
    app.lastPose = figurePose(app.lastDriveAngles);
    renderFigure(dom.figureCanvas, app.lastPose);

    dom.phaseSlider.value = String(app.state.phase);
    dom.phaseSlider.disabled = app.state.playing;
    dom.speedSlider.value = String(app.state.speedIndex);
    dom.driveButton.textContent =
      app.state.driveMode === "all_joints" ? "Drive: all joints" : "Drive: selected only";
    dom.startButton.disabled = app.state.playing;
    dom.stopButton.disabled = !app.state.playing;
    for (const item of Array.from(dom.jointList.children)) {
      const li = item as HTMLLIElement;
      li.classList.toggle(
        "selected",
        Number(li.dataset.index) === app.state.selectedJoint,
      );
    }
    for (const stop of Array.from(dom.speedLabels.children)) {
      const div = stop as HTMLElement;
      div.classList.toggle(
        "current",
        Number(div.dataset.index) === app.state.speedIndex,
      );
    }
  }

  dom.phaseSlider.addEventListener("input", () => {
    app.setPhase(Number(dom.phaseSlider.value));
  });
  dom.speedSlider.addEventListener("input", () => {
    app.setSpeedIndex(Number(dom.speedSlider.value));
  });
  dom.startButton.addEventListener("click", () => app.start());
  dom.stopButton.addEventListener("click", () => app.stop());
  dom.driveButton.addEventListener("click", () => app.toggleDriveMode());
  dom.periodInput.addEventListener("input", () => {
    const seconds = Number(dom.periodInput.value);
    if (Number.isFinite(seconds) && seconds > 0) player.periodMs = seconds * 1000;
  });
  for (const radio of dom.sourceRadios) {
    radio.addEventListener("change", () => {
      if (radio.checked) app.setSource(radio.value as Source);
    });
  }

  if (opts.autoTimer !== false) {
    let last = Date.now();
    timer = setInterval(() => {
      const now = Date.now();
      app.stepFrame(now - last);
      last = now;
    }, 16);
  }

  rebuildSelectors();
  render();
  return app;
}
