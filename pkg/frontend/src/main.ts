import { SessionApi } from "./api.js";
import { render } from "./render.js";
import { GameStore } from "./state.js";

function creationForm(store: GameStore): HTMLElement {
  const form = document.createElement("form");
  form.className = "create";
  const modelInput = document.createElement("textarea");
  modelInput.placeholder = "paste a model document";
  const configInput = document.createElement("textarea");
  configInput.placeholder = "paste a configuration (morphism) document";
  const submit = document.createElement("button");
  submit.textContent = "create session";
  form.append(modelInput, configInput, submit);
  form.onsubmit = (ev) => {
    ev.preventDefault();
    try {
      const model = JSON.parse(modelInput.value);
      const config = JSON.parse(configInput.value);
      void store.createSession(model, config);
    } catch (err) {
      alert(`invalid JSON: ${err}`);
    }
  };
  return form;
}

export function boot(root: HTMLElement, api: SessionApi = new SessionApi()): GameStore {
  const store = new GameStore(api);
  const formHost = document.createElement("div");
  const appHost = document.createElement("div");
  root.append(formHost, appHost);
  formHost.appendChild(creationForm(store));
  store.subscribe((state) => {
    formHost.style.display = state.session ? "none" : "block";
    render(appHost, state, store);
  });
  render(appHost, store.getState(), store);
  const sessionId = new URLSearchParams(window.location.search).get("session");
  if (sessionId) {
    void store.loadSession(sessionId);
  }
  return store;
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  boot(document.getElementById("app") as HTMLElement);
}
