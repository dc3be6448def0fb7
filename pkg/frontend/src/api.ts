/**
 * Typed client for the evaluation service. Only the documented /api/*
 * endpoints are used; there is no endpoint that could reveal a note's
 * ground-truth origin.
 */

export interface ProgressInfo {
    completed: number;
    total: number;
    percent: number;
}

export interface DocumentPayload {
    id: string;
    filename: string;
    description: string;
    mrn: string;
    note_text: string;
}

export interface NextResponse {
    done: boolean;
    document?: DocumentPayload;
    progress: ProgressInfo;
}

export interface UploadResponse {
    dataset_id: string;
    document_count: number;
    warnings: string[];
}

export interface SessionResponse {
    session_id: string;
    progress: ProgressInfo;
}

export interface ResultEntry {
    filename: string;
    evaluator: string;
    timestamp: string;
    total_score: number;
    origin_assessment: string;
    [criterionKey: string]: string | number;
}

export interface SummaryPayload {
    evaluation_count: number;
    evaluator_count: number;
    document_count: number;
    criteria: Array<{ key: string; n: number; mean: number | null; sd: number | null }>;
    totals: {
        overall: { n: number; mean: number | null; sd: number | null };
        by_origin: Record<string, { n: number; mean: number | null; sd: number | null }>;
    };
    comparison: {
        welch: { t: number; df: number; p: number } | null;
        anova: { f: number; df1: number; df2: number; p: number } | null;
    };
    agreement: { pair_count: number; per_criterion: Record<string, number | null> } | null;
}

export interface ApiErrorBody {
    code: string;
    message: string;
    field?: string;
    issues?: Array<{ code: string; field: string }>;
    [key: string]: unknown;
}

export class ApiError extends Error {
    constructor(
        public readonly status: number,
        public readonly body: ApiErrorBody,
    ) {
        super(body.message);
    }

    /** Criterion keys the server rejected, for row highlighting. */
    get fields(): string[] {
        if (this.body.issues?.length) return this.body.issues.map(issue => issue.field);
        return this.body.field ? [this.body.field] : [];
    }
}

export const EXPORT_URL = '/api/results/export';

async function parseError(response: Response): Promise<ApiError> {
    let body: ApiErrorBody;
    try {
        body = (await response.json()) as ApiErrorBody;
    } catch {
        body = { code: 'unexpected', message: `request failed with status ${response.status}` };
    }
    return new ApiError(response.status, body);
}

async function expectJson<T>(response: Response): Promise<T> {
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
}

export async function uploadDataset(file: Blob): Promise<UploadResponse> {
    const response = await fetch('/api/datasets', {
        method: 'POST',
        headers: { 'content-type': 'text/csv' },
        body: file,
    });
    return expectJson<UploadResponse>(response);
}

export async function startSession(
    evaluatorName: string,
    datasetId: string,
): Promise<SessionResponse> {
    const response = await fetch('/api/sessions', {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify({ evaluator_name: evaluatorName, dataset_id: datasetId }),
    });
    return expectJson<SessionResponse>(response);
}

export async function nextDocument(sessionId: string): Promise<NextResponse> {
    const response = await fetch(`/api/sessions/${encodeURIComponent(sessionId)}/next`);
    return expectJson<NextResponse>(response);
}

export async function submitEvaluation(
    sessionId: string,
    documentId: string,
    scores: Record<string, number>,
    origin: string,
): Promise<ProgressInfo> {
    const response = await fetch(
        `/api/sessions/${encodeURIComponent(sessionId)}/evaluations`,
        {
            method: 'POST',
            headers: { 'content-type': 'application/json' },
            body: JSON.stringify({ document_id: documentId, scores, origin }),
        },
    );
    const payload = await expectJson<{ progress: ProgressInfo }>(response);
    return payload.progress;
}

export async function fetchResults(): Promise<ResultEntry[]> {
    return expectJson<ResultEntry[]>(await fetch('/api/results'));
}

export async function fetchSummary(): Promise<SummaryPayload> {
    return expectJson<SummaryPayload>(await fetch('/api/summary'));
}
