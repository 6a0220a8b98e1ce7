/** Viewer bundle parsing and validation. */

export type Source = "human" | "robot";

export interface EntityData {
  channels: string[];
  speeds_mps: number[];
  n_samples: number;
  pos_deg: number[][][];
  torque_nmkg: number[][][];
  power_wkg: number[][][];
  cycle_duration_s: number[] | null;
}

export interface ViewerBundle {
  format: string;
  version: number;
  entities: { human: EntityData; robot: EntityData };
}

export class BundleError extends Error {}

const GRID_KEYS = ["pos_deg", "torque_nmkg", "power_wkg"] as const;

function checkEntity(raw: unknown, name: string): EntityData {
  if (typeof raw !== "object" || raw === null) {
    throw new BundleError(`entity ${name} must be an object`);
  }
  const e = raw as Record<string, unknown>;
  const channels = e.channels;
  const speeds = e.speeds_mps;
  const n = e.n_samples;
  if (!Array.isArray(channels) || channels.some((c) => typeof c !== "string")) {
    throw new BundleError(`entity ${name}: channels must be a string list`);
  }
  if (!Array.isArray(speeds) || speeds.some((s) => typeof s !== "number")) {
    throw new BundleError(`entity ${name}: speeds_mps must be a number list`);
  }
  if (typeof n !== "number" || n < 2) {
    throw new BundleError(`entity ${name}: n_samples must be a number >= 2`);
  }
  for (const key of GRID_KEYS) {
    const grid = e[key];
    if (!Array.isArray(grid) || grid.length !== channels.length) {
      throw new BundleError(`entity ${name}: ${key} must have one row per channel`);
    }
    for (const row of grid as unknown[][]) {
      if (!Array.isArray(row) || row.length !== speeds.length) {
        throw new BundleError(`entity ${name}: ${key} must have one column per speed`);
      }
      for (const cell of row) {
        if (!Array.isArray(cell) || cell.length !== n) {
          throw new BundleError(`entity ${name}: ${key} cycles must have ${n} samples`);
        }
      }
    }
  }
  return {
    channels: channels as string[],
    speeds_mps: speeds as number[],
    n_samples: n,
    pos_deg: e.pos_deg as number[][][],
    torque_nmkg: e.torque_nmkg as number[][][],
    power_wkg: e.power_wkg as number[][][],
    cycle_duration_s: (e.cycle_duration_s as number[] | null) ?? null,
  };
}

export function parseBundle(raw: unknown): ViewerBundle {
  if (typeof raw !== "object" || raw === null) {
    throw new BundleError("bundle must be a JSON object");
  }
  const doc = raw as Record<string, unknown>;
  if (doc.format !== "gdaf-viewer-bundle") {
    throw new BundleError(`unknown bundle format: ${String(doc.format)}`);
  }
  const entities = doc.entities as Record<string, unknown> | undefined;
  if (!entities || !("human" in entities) || !("robot" in entities)) {
    throw new BundleError("bundle must hold both a human and a robot entity");
  }
  return {
    format: "gdaf-viewer-bundle",
    version: typeof doc.version === "number" ? doc.version : 1,
    entities: {
      human: checkEntity(entities.human, "human"),
      robot: checkEntity(entities.robot, "robot"),
    },
  };
}

export function entityData(bundle: ViewerBundle, source: Source): EntityData {
  return bundle.entities[source];
}

/** One cycle-normalized series for (source, quantity, channel, speed). */
export function series(
  bundle: ViewerBundle,
  source: Source,
  quantity: "pos_deg" | "torque_nmkg" | "power_wkg",
  channelIndex: number,
  speedIndex: number,
): number[] {
  return entityData(bundle, source)[quantity][channelIndex][speedIndex];
}
