import init, { diffusivity, action, distance } from "./pkg/toadfront_web.js";

const $ = (id) => document.getElementById(id);
let distanceField = null;

function params() {
  return { kind: $("kind").value, exponent: +$("exponent").value, thetaBar: +$("theta-bar").value };
}

function guarded(f) {
  return () => {
    $("error").textContent = "";
    try {
      f();
    } catch (e) {
      $("error").textContent = e.message ?? String(e);
    }
  };
}

function drawDiffusivity() {
  const { kind, exponent } = params();
  const eps = 10 ** +$("eps").value;
  const thetaMax = 5;
  const s = diffusivity(kind, exponent, eps, thetaMax, 400);
  const c = $("diffusivity"), g = c.getContext("2d");
  g.clearRect(0, 0, c.width, c.height);
  let top = 0, dev = 0;
  for (let k = 0; k < s.length; k += 3) {
    top = Math.max(top, s[k + 1], s[k + 2]);
    if (s[k] >= 0.1) dev = Math.max(dev, Math.abs(s[k + 1] - s[k + 2]));
  }
  const px = (theta) => (theta / thetaMax) * (c.width - 20) + 10;
  const py = (d) => c.height - 10 - (d / top) * (c.height - 20);
  for (const [col, color] of [[2, "#999"], [1, "#c33"]]) {
    g.beginPath();
    for (let k = 0; k < s.length; k += 3) g.lineTo(px(s[k]), py(s[k + col]));
    g.strokeStyle = color;
    g.stroke();
  }
  $("eps-out").textContent = `ε = ${eps.toExponential(1)}, sup over θ ∈ [0.1, 5] of |D̄^ε − D̄| = ${dev.toFixed(4)} (grey: limit)`;
}

// Colors a field on the canvas; `inside(v)` marks the invaded nodes.
function paint(canvas, f, values, inside, shade) {
  const g = canvas.getContext("2d");
  const img = g.createImageData(canvas.width, canvas.height);
  for (let py = 0; py < canvas.height; py++) {
    const j = Math.round((1 - py / (canvas.height - 1)) * (f.n_theta - 1));
    for (let px = 0; px < canvas.width; px++) {
      const i = Math.round((px / (canvas.width - 1)) * (f.n_x - 1));
      const v = values[j * f.n_x + i];
      const o = 4 * (py * canvas.width + px);
      if (inside(v)) {
        img.data.set([40, 90, 170, 255], o);
      } else {
        const s = 255 - Math.round(120 * shade(v));
        img.data.set([s, s, s, 255], o);
      }
    }
  }
  g.putImageData(img, 0, 0);
  // The line x = 0.
  const x0 = ((0 - f.x_min) / (f.x_max - f.x_min)) * canvas.width;
  g.strokeStyle = "#e80";
  g.beginPath();
  g.moveTo(x0, 0);
  g.lineTo(x0, canvas.height);
  g.stroke();
}

function solveAction() {
  const { kind, exponent, thetaBar } = params();
  const f = action(kind, exponent, +$("n-x").value, thetaBar, +$("t-action").value);
  const v = f.values();
  paint($("action"), f, v, (x) => x <= 0, (x) => Math.min(1, x / 2));
  $("front-out").textContent = `front on θ = 0: x = ${f.front.toFixed(4)}`;
  f.free();
}

function solveDistance() {
  const { kind, exponent, thetaBar } = params();
  if (distanceField) distanceField.f.free();
  const f = distance(kind, exponent, 121, thetaBar);
  distanceField = { f, values: f.values() };
  drawReach();
}

function drawReach() {
  if (!distanceField) return;
  const t = +$("t-reach").value;
  const { f, values } = distanceField;
  paint($("reach"), f, values, (d) => d <= t, (d) => Math.min(1, d));
  const n = values.filter((d) => d <= t).length;
  $("reach-out").textContent = `t = ${t.toFixed(2)}, ${n} of ${values.length} nodes reached`;
}

await init();
const all = guarded(() => {
  drawDiffusivity();
  solveAction();
  solveDistance();
});
for (const id of ["kind", "exponent", "theta-bar"]) $(id).addEventListener("change", all);
$("eps").addEventListener("input", guarded(drawDiffusivity));
$("solve").addEventListener("click", guarded(solveAction));
$("t-reach").addEventListener("input", guarded(drawReach));
all();
