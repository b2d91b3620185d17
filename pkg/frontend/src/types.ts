export type Tag = "OK" | "BAD";

export interface AssistResponse {
    serial: number;
    txt1: string;
    txt2: string;
    txt3: string;
    src_tokens: string[];
    mt_tokens: string[];
    tags: Tag[];
    alignment: [number | null, number][];
    highlight: number[];
}

export interface AssistRequest {
    session: string;
    text: string;
    engine: string;
    serial: number;
}

/** One flat log record: ts, session, code plus the code's payload fields. */
export interface EventRecord {
    ts: number;
    session: string;
    code: string;
    [field: string]: unknown;
}

export interface EngineInfo {
    id: string;
    kind: string;
    pairs: [string, string][];
    token_limit: number;
}

export interface Stimulus {
    sid: string;
    domain: string;
    text: string;
    /** character range of the fact the question must ask for, if any */
    highlighted_span?: [number, number];
}
