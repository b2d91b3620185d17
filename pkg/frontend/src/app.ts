import { ApiClient } from "./api.js";
import { renderHighlights, tagClass } from "./highlight.js";
import { SessionController, type ViewState } from "./session.js";
import type { EngineInfo, Stimulus } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
    const node = document.getElementById(id);
    if (!node) throw new Error(`missing #${id}`);
    return node as T;
}

function renderTokenRow(
    container: HTMLElement,
    tokens: string[],
    classes: string[],
): void {
    container.textContent = "";
    tokens.forEach((token, i) => {
        const span = document.createElement("span");
        span.textContent = token;
        span.className = `tok ${classes[i] ?? ""}`.trim();
        container.appendChild(span);
        container.appendChild(document.createTextNode(" "));
    });
}

function renderStimulus(container: HTMLElement, stimulus: Stimulus): void {
    container.textContent = "";
    const span = stimulus.highlighted_span;
    if (!span) {
        container.textContent = stimulus.text;
        return;
    }
    const [from, to] = span;
    container.append(stimulus.text.slice(0, from));
    const mark = document.createElement("mark");
    mark.textContent = stimulus.text.slice(from, to);
    container.append(mark, stimulus.text.slice(to));
}

function render(state: ViewState): void {
    const stimulusBox = el<HTMLDivElement>("stimulus");
    const domainBox = el<HTMLSpanElement>("stimulus-domain");
    if (state.finishedAll) {
        stimulusBox.textContent = "All stimuli done. Thank you!";
        domainBox.textContent = "";
    } else if (state.stimulus) {
        renderStimulus(stimulusBox, state.stimulus);
        domainBox.textContent = state.stimulus.domain;
    }

    const input = el<HTMLTextAreaElement>("txt1");
    if (input.value !== state.txt1) input.value = state.txt1;
    el<HTMLTextAreaElement>("txt3").value = state.txt3;

    renderTokenRow(
        el<HTMLDivElement>("txt2"),
        state.mtTokens,
        state.qeEnabled ? state.tags.map(tagClass) : state.mtTokens.map(() => ""),
    );
    renderTokenRow(
        el<HTMLDivElement>("txt1-highlight"),
        state.srcTokens,
        renderHighlights(state.srcTokens, state.highlight),
    );

    const banner = el<HTMLDivElement>("banner");
    banner.textContent = state.banner ?? "";
    banner.hidden = !state.banner;
}

async function boot(): Promise<void> {
    const api = new ApiClient("");
    const stimuli = (await (await fetch("stimuli.json")).json()) as Stimulus[];
    const engines: EngineInfo[] = await api.engines();

    const engineSelect = el<HTMLSelectElement>("engine");
    for (const engine of engines) {
        if (engine.id.endsWith(":back")) continue; // backward halves of mock pairs
        const option = document.createElement("option");
        option.value = engine.id;
        option.textContent = engine.id;
        engineSelect.appendChild(option);
    }

    const session = `web-${Date.now().toString(36)}`;
    const controller = new SessionController(
        api,
        stimuli,
        {
            session,
            queue: new URLSearchParams(location.search).get("queue") ?? "q-default",
            engine: engineSelect.value,
            qeDomains: new Set(["tech"]),
        },
        render,
    );

    el<HTMLTextAreaElement>("txt1").addEventListener("input", (event) => {
        controller.handleInput((event.target as HTMLTextAreaElement).value);
    });
    el<HTMLButtonElement>("confirm").addEventListener("click", () => {
        void controller.confirm();
    });
    el<HTMLButtonElement>("skip").addEventListener("click", () => {
        const reason = window.prompt("Why do you skip this stimulus?") ?? "";
        if (reason.trim()) void controller.skip(reason);
    });

    await controller.login();
}

boot().catch((error) => {
    document.body.textContent = `failed to start: ${error}`;
});
