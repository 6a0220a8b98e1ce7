/** Sagittal-plane stick figure posed from hip-flexion, knee and ankle angles.
 *
 * Pelvis sits at the origin; each leg is a unit-length thigh and shank plus
 * a short foot. Segment directions are measured from straight down, with
 * flexion rotating the limb forward (+x).
 */

export interface Point {
  x: number;
  y: number;
}

export interface LegAngles {
  hipFlexion: number;
  knee: number;
  ankle: number;
}

export interface LegPoints {
  hip: Point;
  knee: Point;
  ankle: Point;
  toe: Point;
}

const THIGH = 1.0;
const SHANK = 1.0;
const FOOT = 0.35;

const DEG = Math.PI / 180;

function polar(from: Point, angleDeg: number, length: number): Point {
  // angle measured from the downward vertical, positive toward +x (forward)
  const a = angleDeg * DEG;
  return { x: from.x + length * Math.sin(a), y: from.y - length * Math.cos(a) };
}

export function legPoints(angles: LegAngles, hipOffsetX = 0): LegPoints {
  const hip = { x: hipOffsetX, y: 0 };
  const thighAngle = angles.hipFlexion;
  const knee = polar(hip, thighAngle, THIGH);
  const shankAngle = thighAngle - angles.knee; // knee flexion folds the shank back
  const ankle = polar(knee, shankAngle, SHANK);
  const footAngle = shankAngle + 90 + angles.ankle; // dorsiflexion lifts the toe
  const toe = polar(ankle, footAngle, FOOT);
  return { hip, knee, ankle, toe };
}

export interface FigurePose {
  left: LegPoints;
  right: LegPoints;
}

export function figurePose(angles: Map<string, number>): FigurePose {
  const get = (name: string) => angles.get(name) ?? 0;
  return {
    left: legPoints(
      { hipFlexion: get("hip_flexion_l"), knee: get("knee_l"), ankle: get("ankle_l") },
      -0.06,
    ),
    right: legPoints(
      { hipFlexion: get("hip_flexion_r"), knee: get("knee_r"), ankle: get("ankle_r") },
      0.06,
    ),
  };
}

export function renderFigure(canvas: HTMLCanvasElement, pose: FigurePose): void {
  const ctx = canvas.getContext ? canvas.getContext("2d") : null;
  if (!ctx) return; // headless test environment
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);
  const scale = height / 3.2;
  const ox = width / 2;
  const oy = height * 0.28;
  const px = (p: Point) => ({ x: ox + p.x * scale, y: oy - p.y * scale });

  const drawLeg = (leg: LegPoints, color: string) => {
    ctx.strokeStyle = color;
    ctx.lineWidth = 4;
    ctx.lineCap = "round";
    ctx.beginPath();
    const pts = [leg.hip, leg.knee, leg.ankle, leg.toe].map(px);
    ctx.moveTo(pts[0].x, pts[0].y);
    for (const p of pts.slice(1)) ctx.lineTo(p.x, p.y);
    ctx.stroke();
  };

  // trunk stub above the pelvis for orientation
  ctx.strokeStyle = "#555";
  ctx.lineWidth = 5;
  ctx.beginPath();
  const pelvis = px({ x: 0, y: 0 });
  const chest = px({ x: 0, y: 0.9 });
  ctx.moveTo(pelvis.x, pelvis.y);
  ctx.lineTo(chest.x, chest.y);
  ctx.stroke();
  ctx.beginPath();
  ctx.arc(chest.x, chest.y - 12, 9, 0, 2 * Math.PI);
  ctx.stroke();

  drawLeg(pose.left, "#c2584f");
  drawLeg(pose.right, "#3a6ea5");
}
