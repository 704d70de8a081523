// 2D expressive agent face: a vector head with eye and mouth states per
// expression. Deliberately simple shapes; the engine contract only needs
// the four expression classes to be distinguishable.

import type { ExpressionName } from "./protocol.js";

interface FaceParts {
  mouth: string;        // SVG path
  leftEye: string;
  rightEye: string;
  brow?: string;
}

const FACES: Record<ExpressionName, FaceParts> = {
  SlightlyHappy: {
    mouth: "M 70 130 Q 100 145 130 130",
    leftEye: "M 70 85 a 9 9 0 1 0 0.1 0",
    rightEye: "M 130 85 a 9 9 0 1 0 0.1 0",
  },
  Happy: {
    mouth: "M 62 122 Q 100 162 138 122",
    leftEye: "M 62 86 Q 70 76 78 86",
    rightEye: "M 122 86 Q 130 76 138 86",
  },
  Disappointed: {
    mouth: "M 70 142 Q 100 124 130 142",
    leftEye: "M 70 88 a 8 8 0 1 0 0.1 0",
    rightEye: "M 130 88 a 8 8 0 1 0 0.1 0",
    brow: "M 60 70 L 82 78 M 140 70 L 118 78",
  },
  MakingFaces: {
    mouth: "M 72 132 Q 86 146 100 132 Q 114 118 128 132",
    leftEye: "M 62 86 L 78 86",
    rightEye: "M 130 86 a 10 10 0 1 0 0.1 0",
    brow: "M 56 66 L 84 62",
  },
};

export function avatarSvg(expression: ExpressionName): string {
  const face = FACES[expression];
  const brow = face.brow
    ? `<path d="${face.brow}" stroke="#46423f" stroke-width="5" fill="none" stroke-linecap="round"/>`
    : "";
  return `
  <svg viewBox="0 0 200 200" role="img" aria-label="agent face: ${expression}">
    <circle cx="100" cy="100" r="88" fill="#ffe3c2" stroke="#e8b98a" stroke-width="4"/>
    <circle cx="58" cy="116" r="12" fill="#ffc9b0" opacity="0.7"/>
    <circle cx="142" cy="116" r="12" fill="#ffc9b0" opacity="0.7"/>
    ${brow}
    <path d="${face.leftEye}" stroke="#46423f" stroke-width="5" fill="${face.leftEye.includes("a ") ? "#46423f" : "none"}" stroke-linecap="round"/>
    <path d="${face.rightEye}" stroke="#46423f" stroke-width="5" fill="${face.rightEye.includes("a ") ? "#46423f" : "none"}" stroke-linecap="round"/>
    <path d="${face.mouth}" stroke="#9c4f2e" stroke-width="6" fill="none" stroke-linecap="round"/>
  </svg>`;
}
