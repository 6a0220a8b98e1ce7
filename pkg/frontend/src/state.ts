/** Viewer state and its pure transitions.
 *
 * The phase value is the single source of truth: the figure pose and all
 * three plot cursors derive from it through the same nearest-sample
 * mapping. No transition ever touches bundle data.
 */

import { Source, ViewerBundle, entityData } from "./bundle.js";

export type DriveMode = "all_joints" | "selected_only";

export interface ViewerState {
  source: Source;
  speedIndex: number;
  selectedJoint: number;
  playing: boolean;
  driveMode: DriveMode;
  phase: number; // in [0, 1]
}

export function initialState(): ViewerState {
  return {
    source: "human",
    speedIndex: 0,
    selectedJoint: 0,
    playing: false,
    driveMode: "all_joints",
    phase: 0,
  };
}

export function clampPhase(phase: number): number {
  if (!Number.isFinite(phase)) return 0;
  return Math.min(1, Math.max(0, phase));
}

/** Cycle sample nearest to phase*(n-1). */
export function sampleIndexForPhase(phase: number, nSamples: number): number {
  return Math.round(clampPhase(phase) * (nSamples - 1));
}

export function setPhase(state: ViewerState, phase: number): ViewerState {
  return { ...state, phase: clampPhase(phase) };
}

export function setSource(state: ViewerState, bundle: ViewerBundle, source: Source): ViewerState {
  const entity = entityData(bundle, source);
  return {
    ...state,
    source,
    speedIndex: Math.min(state.speedIndex, entity.speeds_mps.length - 1),
    selectedJoint: Math.min(state.selectedJoint, entity.channels.length - 1),
  };
}

export function setSpeedIndex(state: ViewerState, bundle: ViewerBundle, index: number): ViewerState {
  const n = entityData(bundle, state.source).speeds_mps.length;
  if (index < 0 || index >= n) return state;
  return { ...state, speedIndex: index };
}

export function selectJoint(state: ViewerState, bundle: ViewerBundle, index: number): ViewerState {
  const n = entityData(bundle, state.source).channels.length;
  if (index < 0 || index >= n) return state;
  return { ...state, selectedJoint: index };
}

export function toggleDriveMode(state: ViewerState): ViewerState {
  return {
    ...state,
    driveMode: state.driveMode === "all_joints" ? "selected_only" : "all_joints",
  };
}

export function startPlayback(state: ViewerState): ViewerState {
  return { ...state, playing: true };
}

/** Stop freezes the current phase and re-enables the phase slider. */
export function stopPlayback(state: ViewerState): ViewerState {
  return { ...state, playing: false };
}

/**
 * Joint angles (degrees) used to pose the figure at the current phase.
 *
 * In selected_only drive mode only the selected channel follows the
 * phase; every other channel is held at its 0% sample.
 */
export function driveAngles(bundle: ViewerBundle, state: ViewerState): Map<string, number> {
  const entity = entityData(bundle, state.source);
  const at = sampleIndexForPhase(state.phase, entity.n_samples);
  const out = new Map<string, number>();
  entity.channels.forEach((name, idx) => {
    const cycle = entity.pos_deg[idx][state.speedIndex];
    const sample =
      state.driveMode === "selected_only" && idx !== state.selectedJoint ? 0 : at;
    out.set(name, cycle[sample]);
  });
  return out;
}
