// DOM rendering. Tables only: witnesses preview as small element-mapping
// tables rather than drawn diagrams.

import { MoveInfo, SessionState } from "./api.js";
import { GameStore, ViewState } from "./state.js";

const KINDS = ["DomE", "DomU", "CodE", "CodU"];

function el(tag: string, className?: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function configTable(session: SessionState): HTMLElement {
  const wrap = el("section", "config");
  wrap.appendChild(el("h2", undefined, "configuration"));
  const table = el("table", "config-table");
  const head = el("tr");
  for (const h of ["object", "X elements", "Y elements", "m (X -> Y)"]) {
    head.appendChild(el("th", undefined, h));
  }
  table.appendChild(head);
  for (const obj of Object.keys(session.x)) {
    const row = el("tr");
    row.appendChild(el("td", "obj", obj));
    row.appendChild(el("td", undefined, (session.x[obj] ?? []).join(", ") || "(empty)"));
    row.appendChild(el("td", undefined, (session.y[obj] ?? []).join(", ") || "(empty)"));
    const arrows = (session.m[obj] ?? [])
      .map((target, i) => `${obj}:${i} -> ${obj}:${target}`)
      .join(", ");
    row.appendChild(el("td", undefined, arrows || "(empty)"));
    table.appendChild(row);
  }
  wrap.appendChild(table);
  return wrap;
}

function witnessPreview(move: MoveInfo): HTMLElement {
  const box = el("div", "witness");
  for (const [name, table] of Object.entries(move.witnesses)) {
    const parts: string[] = [];
    for (const [obj, images] of Object.entries(table)) {
      images.forEach((target, i) => parts.push(`${obj}:${i} -> ${obj}:${target}`));
    }
    box.appendChild(el("div", "witness-row", `${name}: ${parts.join(", ") || "(empty)"}`));
  }
  return box;
}

function moveBrowser(state: ViewState, store: GameStore): HTMLElement {
  const wrap = el("section", "moves");
  wrap.appendChild(el("h2", undefined, "moves"));

  const controls = el("div", "controls");
  const kindSelect = el("select") as HTMLSelectElement;
  kindSelect.appendChild(new Option("all kinds", ""));
  for (const k of KINDS) kindSelect.appendChild(new Option(k, k));
  kindSelect.value = state.query.kind ?? "";
  kindSelect.onchange = () => {
    void store.setQuery({ kind: kindSelect.value || undefined });
  };
  controls.appendChild(kindSelect);

  const condSelect = el("select") as HTMLSelectElement;
  condSelect.appendChild(new Option("all conditions", ""));
  for (const c of state.session?.conditions ?? []) {
    condSelect.appendChild(new Option(c.name, String(c.index)));
  }
  condSelect.value = state.query.condition === undefined ? "" : String(state.query.condition);
  condSelect.onchange = () => {
    void store.setQuery({
      condition: condSelect.value === "" ? undefined : Number(condSelect.value),
    });
  };
  controls.appendChild(condSelect);

  const productive = el("label", "productive-toggle") as HTMLLabelElement;
  const checkbox = el("input") as HTMLInputElement;
  checkbox.type = "checkbox";
  checkbox.checked = Boolean(state.query.productive);
  checkbox.onchange = () => {
    void store.setQuery({ productive: checkbox.checked });
  };
  productive.appendChild(checkbox);
  productive.appendChild(document.createTextNode(" productive only"));
  controls.appendChild(productive);
  wrap.appendChild(controls);

  const page = state.moves;
  if (!page) {
    wrap.appendChild(el("p", "hint", "no move list yet"));
    return wrap;
  }
  const summary = page.truncated
    ? `showing page ${page.page + 1}; more than ${page.total} moves`
    : `${page.total} move(s), page ${page.page + 1}`;
  wrap.appendChild(el("p", "hint", summary));

  const list = el("ul", "move-list");
  for (const mv of page.moves) {
    const item = el("li", "move");
    const btn = el("button", "apply", `${mv.kind} @ ${mv.condition_name}`) as HTMLButtonElement;
    btn.disabled = state.busy || state.session?.won === true;
    btn.onclick = () => {
      void store.applyMove(mv);
    };
    item.appendChild(btn);
    item.appendChild(witnessPreview(mv));
    list.appendChild(item);
  }
  wrap.appendChild(list);

  const pager = el("div", "pager");
  const prev = el("button", undefined, "prev") as HTMLButtonElement;
  prev.disabled = page.page === 0;
  prev.onclick = () => {
    void store.setQuery({ page: page.page - 1 });
  };
  const next = el("button", undefined, "next") as HTMLButtonElement;
  next.disabled = (page.page + 1) * page.page_size >= page.total;
  next.onclick = () => {
    void store.setQuery({ page: page.page + 1 });
  };
  pager.appendChild(prev);
  pager.appendChild(next);
  wrap.appendChild(pager);
  return wrap;
}

function tracePanel(state: ViewState, store: GameStore): HTMLElement {
  const wrap = el("section", "trace");
  wrap.appendChild(el("h2", undefined, "trace"));
  const list = el("ol", "trace-list");
  for (const step of state.applied) {
    list.appendChild(el("li", undefined, `${step.kind} @ ${step.conditionName}`));
  }
  wrap.appendChild(list);
  const undoBtn = el("button", "undo", "undo") as HTMLButtonElement;
  undoBtn.disabled = state.busy || (state.session?.history_length ?? 0) === 0;
  undoBtn.onclick = () => {
    void store.undo();
  };
  wrap.appendChild(undoBtn);
  const exportBtn = el("button", "export", "export trace") as HTMLButtonElement;
  exportBtn.disabled = !state.session;
  exportBtn.onclick = async () => {
    const doc = await store.exportTrace();
    const blob = new Blob([JSON.stringify(doc, null, 2)], { type: "application/json" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = `${state.session?.session_id ?? "session"}.trace.json`;
    a.click();
    URL.revokeObjectURL(a.href);
  };
  wrap.appendChild(exportBtn);
  return wrap;
}

export function render(root: HTMLElement, state: ViewState, store: GameStore): void {
  root.textContent = "";
  const header = el("header");
  header.appendChild(el("h1", undefined, "reflection game"));
  if (state.session) {
    header.appendChild(el("p", "digest", `configuration ${state.session.digest.slice(0, 12)}…`));
  }
  root.appendChild(header);

  if (state.phase === "idle") {
    root.appendChild(el("p", "hint", "append ?session=<id> to the URL, or create a session below"));
  }
  if (state.phase === "loading") {
    root.appendChild(el("p", "hint", "loading…"));
  }
  if (state.error) {
    root.appendChild(el("p", "error", state.error));
  }
  if (state.notice) {
    root.appendChild(el("p", "notice", state.notice));
  }
  if (state.session?.won) {
    root.appendChild(el("div", "win-banner", "configuration is an isomorphism — you won"));
  }
  if (state.session) {
    root.appendChild(configTable(state.session));
    root.appendChild(moveBrowser(state, store));
    root.appendChild(tracePanel(state, store));
  }
}
