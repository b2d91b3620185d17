import type {
    AssistRequest,
    AssistResponse,
    EngineInfo,
    EventRecord,
} from "./types.js";

export class ApiError extends Error {
    constructor(
        readonly status: number,
        readonly code: string,
        detail: string,
    ) {
        super(`${code}: ${detail}`);
    }
}

/** Thin fetch wrapper over the assist/log/engines endpoints. */
export class ApiClient {
    constructor(
        private readonly baseUrl: string,
        private readonly fetchFn: typeof fetch = (...args) => fetch(...args),
    ) {}

    private async request(path: string, init?: RequestInit): Promise<unknown> {
        const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
        const body = (await response.json()) as Record<string, unknown>;
        if (!response.ok) {
            throw new ApiError(
                response.status,
                String(body.error ?? "error"),
                String(body.detail ?? response.statusText),
            );
        }
        return body;
    }

    private post(path: string, payload: unknown): Promise<unknown> {
        return this.request(path, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(payload),
        });
    }

    async assist(request: AssistRequest): Promise<AssistResponse> {
        return (await this.post("/assist", request)) as AssistResponse;
    }

    async log(record: EventRecord): Promise<number> {
        const body = (await this.post("/log", record)) as { seq: number };
        return body.seq;
    }

    async engines(): Promise<EngineInfo[]> {
        const body = (await this.request("/engines")) as {
            engines: EngineInfo[];
        };
        return body.engines;
    }
}
