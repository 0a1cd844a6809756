import init, { potential, spectrum, wavefunction } from "./pkg/sinvar_wasm.js";

const $ = (id) => document.getElementById(id);

function frame(canvas, xr, yr) {
  const ctx = canvas.getContext("2d");
  const pad = 36;
  const w = canvas.width - 2 * pad;
  const h = canvas.height - 2 * pad;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const sx = (x) => pad + ((x - xr[0]) / (xr[1] - xr[0])) * w;
  const sy = (y) => pad + h - ((y - yr[0]) / (yr[1] - yr[0])) * h;
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w, h);
  ctx.fillStyle = "#555";
  ctx.font = "11px sans-serif";
  ctx.fillText(xr[0].toFixed(2), pad, canvas.height - 12);
  ctx.fillText(xr[1].toFixed(2), pad + w - 24, canvas.height - 12);
  ctx.fillText(yr[1].toFixed(2), 2, pad + 4);
  ctx.fillText(yr[0].toFixed(2), 2, pad + h);
  return { ctx, sx, sy, clip: () => { ctx.save(); ctx.beginPath(); ctx.rect(pad, pad, w, h); ctx.clip(); } };
}

function line(f, xs, ys, color) {
  f.ctx.strokeStyle = color;
  f.ctx.beginPath();
  xs.forEach((x, i) => (i ? f.ctx.lineTo(f.sx(x), f.sy(ys[i])) : f.ctx.moveTo(f.sx(x), f.sy(ys[i]))));
  f.ctx.stroke();
}

function params() {
  return { eta: parseFloat($("eta").value), ext: $("ext").value, n: parseInt($("nlevels").value, 10) };
}

function guard(fn) {
  try {
    $("status").textContent = "";
    fn();
  } catch (e) {
    $("status").textContent = String(e);
  }
}

function drawSpectrum() {
  const { eta, ext, n } = params();
  const s = JSON.parse(spectrum(eta, ext, n));
  const top = s.levels.length ? s.levels[s.levels.length - 1].e : 5;
  const xMax = Math.max(3, Math.pow(Math.max(top, 1), 1.5) * 1.1);
  const p = JSON.parse(potential(eta, 0.02, xMax, 600));
  const lo = Math.min(...s.levels.map((l) => l.e), Math.min(...p.v)) - 0.5;
  const f = frame($("pot"), [0, xMax], [lo, top + 1.5]);
  f.clip();
  line(f, p.x, p.v, "#1f5fbf");
  line(f, p.x, p.v_tilde, "#bbb");
  f.ctx.strokeStyle = "#c0392b";
  for (const l of s.levels) {
    f.ctx.beginPath();
    f.ctx.moveTo(f.sx(0), f.sy(l.e));
    f.ctx.lineTo(f.sx(xMax), f.sy(l.e));
    f.ctx.stroke();
  }
  f.ctx.restore();
  const rows = s.levels.map((l) => `<tr><td>${l.n}</td><td>${l.y.toFixed(10)}</td><td>${l.e.toFixed(10)}</td><td>${l.nodes}</td></tr>`);
  $("levels").innerHTML = "<tr><th>n</th><th>y</th><th>E</th><th>nodes</th></tr>" + rows.join("");
  $("level").max = s.levels.length;
}

function drawWave() {
  const { eta, ext } = params();
  const w = JSON.parse(wavefunction(eta, ext, parseInt($("level").value, 10), 1201));
  const peak = Math.max(...w.psi.map(Math.abs));
  const xr = [w.x[0], w.x[w.x.length - 1]];
  const f = frame($("wave"), xr, [-1.1 * peak, 1.1 * peak]);
  f.ctx.strokeStyle = "#ddd";
  f.ctx.beginPath();
  f.ctx.moveTo(f.sx(xr[0]), f.sy(0));
  f.ctx.lineTo(f.sx(xr[1]), f.sy(0));
  f.ctx.stroke();
  line(f, w.x, w.psi, "#27ae60");
  f.ctx.fillStyle = "#222";
  f.ctx.fillText(`level ${w.n}: y = ${w.y.toFixed(8)}, ${w.nodes} nodes on x > 0, parity ${w.parity}`, 44, 20);
}

await init();
$("run").addEventListener("click", () => guard(drawSpectrum));
$("psi").addEventListener("click", () => guard(drawWave));
guard(() => {
  drawSpectrum();
  drawWave();
});
