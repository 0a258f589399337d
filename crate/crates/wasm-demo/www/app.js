import init, { analyze, evaluate_synthetic, tree_for_synthetic } from "./pkg/linguafraud_wasm.js";

const $ = (id) => document.getElementById(id);

function esc(s) {
  return s.replace(/[&<>"]/g, (c) => ({ "&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;" })[c]);
}

function fail(el, msg) {
  el.innerHTML = `<p class="err">${esc(msg)}</p>`;
}

// byte offsets from Rust -> string offsets
function byteToChar(text) {
  const enc = new TextEncoder();
  const map = new Map();
  let b = 0;
  for (let i = 0; i <= text.length; ) {
    map.set(b, i);
    if (i === text.length) break;
    const cp = text.codePointAt(i);
    const ch = String.fromCodePoint(cp);
    b += enc.encode(ch).length;
    i += ch.length;
  }
  return (off) => map.get(off);
}

function highlighted(resp) {
  const at = byteToChar(resp.text);
  const hs = [...resp.highlights].sort((a, b) => a.start - b.start);
  let out = "", pos = 0;
  for (const h of hs) {
    const s = at(h.start), e = at(h.end);
    if (s < pos) continue;
    out += esc(resp.text.slice(pos, s));
    out += `<mark title="${esc(h.category)}">${esc(resp.text.slice(s, e))}</mark>`;
    pos = e;
  }
  return out + esc(resp.text.slice(pos));
}

function showAnalysis() {
  const el = $("analysis");
  const r = JSON.parse(analyze($("call").value));
  if (r.error) return fail(el, r.error);
  let html = "<h3>Customer responses</h3>";
  for (const resp of r.responses) {
    html += `<div class="resp"><span class="score">${resp.sentiment.toFixed(3)}</span>${highlighted(resp)}</div>`;
  }
  html += "<h3>Features</h3><table>";
  for (const [name, v] of r.features) {
    html += `<tr><td>${esc(name)}</td><td class="v">${Number.isInteger(v) ? v : v.toFixed(4)}</td></tr>`;
  }
  el.innerHTML = html + "</table><p>Hover a highlight for its marker category.</p>";
}

function params() {
  return [Number($("signal").value), Math.max(0, Math.floor(Number($("seed").value)))];
}

function showReport() {
  const r = JSON.parse(evaluate_synthetic(...params()));
  $("report").textContent = r.error ? r.error : r.text;
}

function treeHtml(ex, i) {
  const n = ex.nodes[i];
  const counts = `[${n.counts.join(", ")}]`;
  if (n.type === "leaf") {
    return `<li><span class="${n.class}">${n.class}</span> ${counts}</li>`;
  }
  const name = esc(ex.feature_names[n.feature]);
  return `<li>${name} &le; ${n.threshold} ${counts}<ul>` +
    `<li>yes<ul>${treeHtml(ex, n.left)}</ul></li>` +
    `<li>no<ul>${treeHtml(ex, n.right)}</ul></li></ul></li>`;
}

function showTree() {
  const r = JSON.parse(tree_for_synthetic(...params()));
  if (r.error) return fail($("treeview"), r.error);
  $("treeview").innerHTML = `<ul class="tree">${treeHtml(r.explanation, 0)}</ul>` +
    "<p>Counts are [non_fraud, fraud] training calls reaching each node.</p>";
  const a = $("dot");
  a.href = URL.createObjectURL(new Blob([r.dot], { type: "text/vnd.graphviz" }));
  a.hidden = false;
}

await init();
$("analyze").onclick = showAnalysis;
$("evaluate").onclick = showReport;
$("tree").onclick = showTree;
showAnalysis();
