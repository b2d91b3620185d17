import { EventReporter } from "./events.js";
import { QueryScheduler } from "./scheduler.js";
import type {
    AssistRequest,
    AssistResponse,
    EventRecord,
    Stimulus,
    Tag,
} from "./types.js";

/** The slice of the backend API the controller needs (ApiClient fits). */
export interface AssistApi {
    assist(request: AssistRequest): Promise<AssistResponse>;
    log(record: EventRecord): Promise<number>;
}

export interface ViewState {
    stimulus: Stimulus | null;
    finishedAll: boolean;
    txt1: string;
    txt2: string;
    txt3: string;
    srcTokens: string[];
    mtTokens: string[];
    tags: Tag[];
    highlight: number[];
    qeEnabled: boolean;
    banner: string | null;
}

export interface SessionOptions {
    session: string;
    queue: string;
    engine: string;
    debounceMs?: number;
    /** stimulus domains for which QE highlighting is shown */
    qeDomains?: Set<string>;
    now?: () => number;
}

function emptyView(): ViewState {
    return {
        stimulus: null,
        finishedAll: false,
        txt1: "",
        txt2: "",
        txt3: "",
        srcTokens: [],
        mtTokens: [],
        tags: [],
        highlight: [],
        qeEnabled: true,
        banner: null,
    };
}

/**
 * Drives one annotation session: stimulus navigation with confirm/skip,
 * debounced assist queries for the three text areas, and the event stream
 * the logger endpoint expects (START on login, NEXT per stimulus, CONFIRM
 * or SKIP per decision; translation events are logged server-side).
 */
export class SessionController {
    readonly state: ViewState = emptyView();

    private readonly reporter: EventReporter;
    private readonly scheduler: QueryScheduler;
    private index = -1;

    constructor(
        private readonly api: AssistApi,
        private readonly stimuli: Stimulus[],
        private readonly options: SessionOptions,
        private readonly onChange: (state: ViewState) => void = () => {},
    ) {
        this.reporter = new EventReporter(
            async (record) => {
                await this.api.log(record);
            },
            options.session,
            options.now,
        );
        this.scheduler = new QueryScheduler(
            (text, serial) =>
                this.api.assist({
                    session: this.options.session,
                    text,
                    engine: this.options.engine,
                    serial,
                }),
            (response) => this.applyAssist(response),
            (error) => this.showBanner(String(error)),
            options.debounceMs ?? 500,
        );
    }

    /** Log in: announce the assigned stimulus queue, then show stimulus 0. */
    async login(): Promise<void> {
        await this.reporter.emit("START", { queue: this.options.queue });
        await this.advance("start");
    }

    async confirm(): Promise<void> {
        if (!this.state.stimulus) return;
        await this.reporter.emit("CONFIRM", {
            sid: this.state.stimulus.sid,
            txt1: this.state.txt1,
            txt2: this.state.txt2,
        });
        await this.advance("confirmed previous");
    }

    /** Skip the stimulus; a non-empty reason is required. */
    async skip(reason: string): Promise<void> {
        if (!this.state.stimulus || !reason.trim()) return;
        await this.reporter.emit("SKIP", { reason });
        await this.advance("skipped previous");
    }

    handleInput(text: string): void {
        this.state.txt1 = text;
        this.scheduler.input(text);
        this.onChange(this.state);
    }

    /** Visible for tests: feed a response as if the network delivered it. */
    acceptResponse(response: AssistResponse): void {
        this.scheduler.accept(response);
    }

    get eventBacklog(): number {
        return this.reporter.queuedCount;
    }

    private async advance(reason: string): Promise<void> {
        this.scheduler.dispose();
        this.index += 1;
        const stimulus = this.stimuli[this.index] ?? null;
        Object.assign(this.state, emptyView());
        this.state.stimulus = stimulus;
        if (!stimulus) {
            this.state.finishedAll = true;
            this.onChange(this.state);
            return;
        }
        this.state.qeEnabled =
            !this.options.qeDomains || this.options.qeDomains.has(stimulus.domain);
        await this.reporter.emit("NEXT", { sid: stimulus.sid, reason });
        this.onChange(this.state);
    }

    private applyAssist(response: AssistResponse): void {
        // the scheduler already dropped stale serials; a response for a
        // stimulus we have moved past is also stale
        if (response.txt1 !== this.state.txt1) return;
        this.state.txt2 = response.txt2;
        this.state.txt3 = response.txt3;
        this.state.srcTokens = response.src_tokens;
        this.state.mtTokens = response.mt_tokens;
        this.state.tags = response.tags;
        this.state.highlight = this.state.qeEnabled
            ? response.highlight
            : response.highlight.map(() => 0);
        this.state.banner = null;
        this.onChange(this.state);
    }

    private showBanner(message: string): void {
        // non-blocking: the last good translation state stays on screen
        this.state.banner = message;
        this.onChange(this.state);
    }
}
