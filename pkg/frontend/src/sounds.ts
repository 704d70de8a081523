// Short synthesized answer-feedback cues; no audio assets needed.

let context: AudioContext | null = null;

function ensureContext(): AudioContext | null {
  if (typeof AudioContext === "undefined") return null;
  if (!context) context = new AudioContext();
  return context;
}

function beep(frequencies: number[], duration = 0.12) {
  const ctx = ensureContext();
  if (!ctx) return;
  frequencies.forEach((frequency, i) => {
    const osc = ctx.createOscillator();
    const gain = ctx.createGain();
    osc.frequency.value = frequency;
    osc.type = "sine";
    const at = ctx.currentTime + i * duration;
    gain.gain.setValueAtTime(0.12, at);
    gain.gain.exponentialRampToValueAtTime(0.001, at + duration);
    osc.connect(gain).connect(ctx.destination);
    osc.start(at);
    osc.stop(at + duration);
  });
}

export function playCue(cue: "positive" | "negative", enabled: boolean) {
  if (!enabled) return;
  if (cue === "positive") {
    beep([660, 880]);
  } else {
    beep([220]);
  }
}
