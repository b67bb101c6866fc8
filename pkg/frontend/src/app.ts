// Browser shell: joins a team, keeps the canvas/detail/form in sync with the
// view model, and submits papers through the API. All state transitions go
// through the pure modules; this file only touches the DOM.

import { ApiClient, buildSubmitRequest, violationsToFieldErrors, ApiError } from "./api.js";
import type { FieldError, SubmitForm } from "./api.js";
import { WorkspaceClient } from "./client.js";
import { renderWorkspace, sceneToSvg, CANVAS } from "./render.js";
import { openPaper, selectPaper } from "./state.js";
import type { WorkspaceViewModel } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function main(): void {
  const params = new URLSearchParams(window.location.search);
  const api = new ApiClient(params.get("api") ?? window.location.origin);
  const joinPanel = el<HTMLDivElement>("join-panel");
  const workPanel = el<HTMLDivElement>("workspace-panel");

  el<HTMLButtonElement>("join-button").addEventListener("click", () => {
    void (async () => {
      const teamId = el<HTMLInputElement>("join-team").value.trim();
      const name = el<HTMLInputElement>("join-name").value.trim() || "anonymous";
      try {
        const member = await api.joinTeam(teamId, name);
        joinPanel.hidden = true;
        workPanel.hidden = false;
        runWorkspace(api, teamId, member.member_id);
      } catch (exc) {
        el<HTMLParagraphElement>("join-error").textContent = String(exc);
      }
    })();
  });
}

function runWorkspace(api: ApiClient, teamId: string, memberId: string): void {
  const canvas = el<SVGSVGElement & HTMLElement>("canvas");
  canvas.setAttribute("viewBox", `0 0 ${CANVAS.width} ${CANVAS.height}`);
  const detail = el<HTMLDivElement>("detail");
  const status = el<HTMLSpanElement>("connection");
  const citationPicker = el<HTMLDivElement>("citation-picker");

  const client = new WorkspaceClient((fromSeq) => api.streamUrl(teamId, fromSeq), teamId, {
    onChange: (vm) => render(vm),
  });

  function render(vm: WorkspaceViewModel): void {
    status.textContent = vm.connection.connected
      ? `live, seq ${vm.connection.lastSeq}`
      : "reconnecting…";
    canvas.innerHTML = sceneToSvg(renderWorkspace(vm));
    for (const node of canvas.querySelectorAll<SVGGElement>("[data-paper]")) {
      node.addEventListener("click", () => {
        client.vm = selectPaper(client.vm, node.dataset.paper ?? null);
        render(client.vm);
      });
    }
    renderDetail(vm);
    renderCitationPicker(vm);
  }

  function renderDetail(vm: WorkspaceViewModel): void {
    if (vm.selection === null) {
      detail.innerHTML = "<p>Click a mini-paper to open it.</p>";
      return;
    }
    const view = openPaper(vm, vm.selection);
    if (!view) return;
    const cites = view.cites
      .map((id) => `<a href="#" data-goto="${id}">${id}</a>`)
      .join(", ");
    const citedBy = view.citedBy
      .map((id) => `<a href="#" data-goto="${id}">${id}</a>`)
      .join(", ");
    detail.innerHTML = `
      <h3>${view.title}</h3>
      <p class="byline">${view.kind} by ${view.author}${view.isFinal ? " — final analysis" : ""}</p>
      ${view.score !== undefined ? `<p class="score">score ${view.score}</p>` : ""}
      ${view.argument ? `<p class="argument">${view.argument}</p>` : ""}
      ${view.payloadText ? `<pre>${view.payloadText}</pre>` : ""}
      <p>cites: ${cites || "—"}</p>
      <p>cited by: ${citedBy || "—"}</p>`;
    for (const link of detail.querySelectorAll<HTMLAnchorElement>("[data-goto]")) {
      link.addEventListener("click", (event) => {
        event.preventDefault();
        client.vm = selectPaper(client.vm, link.dataset.goto ?? null);
        render(client.vm);
      });
    }
  }

  function renderCitationPicker(vm: WorkspaceViewModel): void {
    citationPicker.innerHTML = vm.papers
      .map(
        (p) =>
          `<label><input type="checkbox" name="cite" value="${p.id}"> ${p.id} · ${p.title}</label>`,
      )
      .join("");
  }

  el<HTMLButtonElement>("submit-button").addEventListener("click", () => {
    void submit();
  });

  async function submit(): Promise<void> {
    clearErrors();
    if (!client.vm.connection.connected) {
      showErrors([{ field: "form", message: "offline: submission disabled" }]);
      return;
    }
    const form: SubmitForm = {
      author: memberId,
      title: el<HTMLInputElement>("f-title").value,
      kind: el<HTMLSelectElement>("f-kind").value as SubmitForm["kind"],
      argument: el<HTMLTextAreaElement>("f-argument").value,
      payloadText: el<HTMLTextAreaElement>("f-payload").value,
      citations: Array.from(
        document.querySelectorAll<HTMLInputElement>("input[name=cite]:checked"),
      ).map((input) => input.value),
      isFinal: el<HTMLInputElement>("f-final").checked,
    };
    const built = buildSubmitRequest(form);
    if (!built.ok) {
      showErrors(built.errors);
      return;
    }
    try {
      await api.submitPaper(teamId, built.body);
      // The paper appears via the stream; only the inputs are reset.
      el<HTMLInputElement>("f-title").value = "";
      el<HTMLTextAreaElement>("f-argument").value = "";
      el<HTMLTextAreaElement>("f-payload").value = "";
      el<HTMLInputElement>("f-final").checked = false;
    } catch (exc) {
      if (exc instanceof ApiError) {
        showErrors(violationsToFieldErrors(exc.payload.violations));
      } else {
        showErrors([{ field: "form", message: String(exc) }]);
      }
    }
  }

  function clearErrors(): void {
    for (const node of document.querySelectorAll(".field-error")) {
      node.textContent = "";
    }
  }

  function showErrors(errors: FieldError[]): void {
    for (const error of errors) {
      const slot = document.getElementById(`err-${error.field}`);
      if (slot) {
        slot.textContent = slot.textContent
          ? `${slot.textContent}; ${error.message}`
          : error.message;
      }
    }
  }

  render(client.vm);
  client.start();
}

main();
