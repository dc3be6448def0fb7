import { UploadResponse } from '../api.js';
import { escapeHtml } from '../dom.js';

export interface HomeContext {
    evaluatorName: string;
    dataset: UploadResponse | null;
    uploadError: string | null;
    busy: boolean;
    onNameChange(name: string): void;
    onFileChosen(file: File): void;
    onStart(): void;
    onShowInstructions(): void;
    onShowResults(): void;
}

export function renderHome(root: HTMLElement, ctx: HomeContext): void {
    const canStart = ctx.evaluatorName.trim() !== '' && ctx.dataset !== null
        && ctx.dataset.document_count > 0 && !ctx.busy;
    root.innerHTML = `
<header>
  <h1>Document Evaluation</h1>
  <nav>
    <button id="nav-instructions" type="button">Instructions</button>
    <button id="nav-results" type="button">View Results</button>
  </nav>
</header>
<section class="card">
  <label for="evaluator-name">Evaluator name</label>
  <input id="evaluator-name" type="text" value="${escapeHtml(ctx.evaluatorName)}"
         placeholder="Your name" autocomplete="name">

  <label for="csv-file">Notes corpus (CSV with filename, description, mrn, note columns)</label>
  <input id="csv-file" type="file" accept=".csv,text/csv">
  <div id="upload-status" role="status">${uploadStatus(ctx)}</div>

  <button id="start-session" type="button" ${canStart ? '' : 'disabled'}>
    Start evaluating
  </button>
</section>`;

    root.querySelector<HTMLInputElement>('#evaluator-name')!.addEventListener('input', event => {
        ctx.onNameChange((event.target as HTMLInputElement).value);
    });
    root.querySelector<HTMLInputElement>('#csv-file')!.addEventListener('change', event => {
        const file = (event.target as HTMLInputElement).files?.[0];
        if (file) ctx.onFileChosen(file);
    });
    root.querySelector<HTMLButtonElement>('#start-session')!.addEventListener('click', ctx.onStart);
    root.querySelector<HTMLButtonElement>('#nav-instructions')!.addEventListener('click', ctx.onShowInstructions);
    root.querySelector<HTMLButtonElement>('#nav-results')!.addEventListener('click', ctx.onShowResults);
}

function uploadStatus(ctx: HomeContext): string {
    if (ctx.uploadError !== null) {
        // server's row-level message, verbatim
        return `<span class="error">${escapeHtml(ctx.uploadError)}</span>`;
    }
    if (ctx.dataset !== null) {
        const warnings = ctx.dataset.warnings
            .map(warning => `<li>${escapeHtml(warning)}</li>`)
            .join('');
        return (
            `<span class="ok">${ctx.dataset.document_count} documents loaded</span>` +
            (warnings ? `<ul class="warnings">${warnings}</ul>` : '')
        );
    }
    return 'No corpus uploaded yet.';
}
