import {
    ApiError,
    NextResponse,
    UploadResponse,
    fetchResults,
    fetchSummary,
    nextDocument,
    startSession,
    submitEvaluation,
    uploadDataset,
} from './api.js';
import { escapeHtml, progressText } from './dom.js';
import { completeScores, readForm } from './form.js';
import { configuredLabelStyle } from './rubric.js';
import {
    renderEvaluate,
    setSubmitting,
    showFormError,
    updateProgressLine,
} from './views/evaluate.js';
import { renderHome } from './views/home.js';
import { renderInstructions } from './views/instructions.js';
import { renderResults } from './views/results.js';

type Route = 'home' | 'instructions' | 'evaluate' | 'done' | 'results';

interface AppState {
    route: Route;
    evaluatorName: string;
    dataset: UploadResponse | null;
    uploadError: string | null;
    sessionId: string | null;
    current: NextResponse | null;
    busy: boolean;
    submitting: boolean;
}

export function initApp(root: HTMLElement): void {
    const state: AppState = {
        route: 'home',
        evaluatorName: '',
        dataset: null,
        uploadError: null,
        sessionId: null,
        current: null,
        busy: false,
        submitting: false,
    };
    const labelStyle = configuredLabelStyle();

    function render(): void {
        switch (state.route) {
            case 'home':
                renderHome(root, {
                    evaluatorName: state.evaluatorName,
                    dataset: state.dataset,
                    uploadError: state.uploadError,
                    busy: state.busy,
                    onNameChange(name) {
                        state.evaluatorName = name;
                        // toggle the start button without rebuilding (keeps focus)
                        const start = root.querySelector<HTMLButtonElement>('#start-session');
                        if (start) {
                            start.disabled =
                                name.trim() === '' ||
                                state.dataset === null ||
                                state.dataset.document_count === 0 ||
                                state.busy;
                        }
                    },
                    onFileChosen: uploadFile,
                    onStart: startEvaluating,
                    onShowInstructions: () => go('instructions'),
                    onShowResults: showResults,
                });
                break;
            case 'instructions':
                renderInstructions(root, { onBackHome: () => go('home') });
                break;
            case 'evaluate':
                renderEvaluate(root, {
                    evaluatorName: state.evaluatorName,
                    document: state.current!.document!,
                    progress: state.current!.progress,
                    labelStyle,
                    onSubmit: submitCurrent,
                    onShowInstructions: () => go('instructions'),
                    onShowResults: showResults,
                });
                break;
            case 'done':
                renderDone();
                break;
            case 'results':
                // showResults renders asynchronously after fetching
                break;
        }
    }

    function go(route: Route): void {
        state.route = route;
        render();
    }

    async function uploadFile(file: File): Promise<void> {
        state.busy = true;
        state.uploadError = null;
        render();
        try {
            state.dataset = await uploadDataset(file);
        } catch (error) {
            state.dataset = null;
            state.uploadError = error instanceof ApiError
                ? error.message
                : 'Upload failed; is the server running?';
        } finally {
            state.busy = false;
            render();
        }
    }

    async function startEvaluating(): Promise<void> {
        if (!state.dataset || state.evaluatorName.trim() === '') return;
        state.busy = true;
        try {
            const session = await startSession(
                state.evaluatorName.trim(),
                state.dataset.dataset_id,
            );
            state.sessionId = session.session_id;
            state.current = await nextDocument(session.session_id);
            state.route = state.current.done ? 'done' : 'evaluate';
        } catch (error) {
            state.uploadError = error instanceof ApiError
                ? error.message
                : 'Could not start the session.';
            state.route = 'home';
        } finally {
            state.busy = false;
            render();
        }
    }

    async function submitCurrent(): Promise<void> {
        if (state.submitting || !state.sessionId || !state.current?.document) return;
        const form = readForm(root);
        state.submitting = true;
        setSubmitting(root, true);
        try {
            const progress = await submitEvaluation(
                state.sessionId,
                state.current.document.id,
                completeScores(form),
                form.origin!,
            );
            updateProgressLine(root, progress);
            state.current = await nextDocument(state.sessionId);
            state.route = state.current.done ? 'done' : 'evaluate';
            state.submitting = false;
            render();
        } catch (error) {
            state.submitting = false;
            if (error instanceof ApiError) {
                showFormError(root, error.message, error.fields);
                setSubmitting(root, false);
            } else {
                showFormError(root, 'Submission failed; is the server running?', []);
                setSubmitting(root, false);
            }
        }
    }

    async function showResults(): Promise<void> {
        state.route = 'results';
        root.innerHTML = '<p class="empty">Loading results…</p>';
        try {
            const [entries, summary] = await Promise.all([fetchResults(), fetchSummary()]);
            renderResults(root, {
                entries,
                summary,
                labelStyle,
                onBackHome: () => go('home'),
            });
        } catch {
            root.innerHTML = '<p class="error">Could not load results.</p>';
        }
    }

    function renderDone(): void {
        const progress = state.current?.progress;
        root.innerHTML = `
<header><h1>Document Evaluation</h1></header>
<section class="card done">
  <h2>All documents evaluated</h2>
  <p id="progress-line">${progress ? escapeHtml(progressText(progress)) : ''}</p>
  <p>Thank you, ${escapeHtml(state.evaluatorName)}.</p>
  <button id="nav-results" type="button">View Results</button>
</section>`;
        root.querySelector<HTMLButtonElement>('#nav-results')!.addEventListener('click', showResults);
    }

    render();
}

const mount = typeof document !== 'undefined' ? document.getElementById('app') : null;
if (mount) initApp(mount);
