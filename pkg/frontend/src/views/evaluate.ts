import { DocumentPayload, ProgressInfo } from '../api.js';
import { escapeAttr, escapeHtml, progressText } from '../dom.js';
import { isComplete, readForm } from '../form.js';
import {
    ANCHOR_HIGH,
    ANCHOR_LOW,
    CRITERIA,
    LIKERT_VALUES,
    LabelStyle,
    ORIGIN_OPTIONS,
    displayDescription,
    displayLabel,
} from '../rubric.js';

export interface EvaluateContext {
    evaluatorName: string;
    document: DocumentPayload;
    progress: ProgressInfo;
    labelStyle: LabelStyle;
    onSubmit(): void;
    onShowInstructions(): void;
    onShowResults(): void;
}

export function renderEvaluate(root: HTMLElement, ctx: EvaluateContext): void {
    const rows = CRITERIA.map(criterion => likertRow(criterion, ctx.labelStyle)).join('');
    const originRow = ORIGIN_OPTIONS.map(
        option => `
      <label class="radio-option">
        <input type="radio" name="origin" value="${escapeAttr(option.value)}">
        <span>${escapeHtml(option.label)}</span>
      </label>`,
    ).join('');

    root.innerHTML = `
<header>
  <h1>Document Evaluation</h1>
  <nav>
    <button id="nav-instructions" type="button">Instructions</button>
    <button id="nav-results" type="button">View Results</button>
  </nav>
</header>
<p>Evaluator: <strong id="evaluator-label">${escapeHtml(ctx.evaluatorName)}</strong></p>
<p id="progress-line">${escapeHtml(progressText(ctx.progress))}</p>
<section class="card document">
  <h2>Document Content:</h2>
  <p class="field-highlight" id="doc-description">Description: ${escapeHtml(ctx.document.description)}</p>
  <p class="field-highlight" id="doc-mrn">MRN: ${escapeHtml(ctx.document.mrn)}</p>
  <pre id="doc-note">${escapeHtml(ctx.document.note_text)}</pre>
</section>
<form id="evaluation-form">
  ${rows}
  <fieldset class="origin" data-field="origin">
    <legend>Note Origin Assessment</legend>
    ${originRow}
  </fieldset>
  <div id="form-error" class="error" hidden></div>
  <button id="submit-evaluation" type="submit" disabled>Submit Evaluation</button>
</form>`;

    const form = root.querySelector<HTMLFormElement>('#evaluation-form')!;
    const submit = root.querySelector<HTMLButtonElement>('#submit-evaluation')!;
    form.addEventListener('change', () => {
        submit.disabled = !isComplete(readForm(form));
    });
    form.addEventListener('submit', event => {
        event.preventDefault();
        if (!isComplete(readForm(form))) return; // guard even if enabled state was tampered with
        ctx.onSubmit();
    });
    root.querySelector<HTMLButtonElement>('#nav-instructions')!.addEventListener('click', ctx.onShowInstructions);
    root.querySelector<HTMLButtonElement>('#nav-results')!.addEventListener('click', ctx.onShowResults);
}

function likertRow(criterion: (typeof CRITERIA)[number], style: LabelStyle): string {
    const inputs = LIKERT_VALUES.map(
        value => `
        <label class="likert-value">
          <input type="radio" name="criterion-${escapeAttr(criterion.key)}" value="${value}">
          <span>${value}</span>
        </label>`,
    ).join('');
    return `
  <fieldset class="likert" data-field="${escapeAttr(criterion.key)}">
    <legend>${criterion.ordinal}. ${escapeHtml(displayLabel(criterion, style))}</legend>
    <p class="description">${escapeHtml(displayDescription(criterion, style))}</p>
    <div class="scale">
      <span class="anchor">${escapeHtml(ANCHOR_LOW)}</span>
      ${inputs}
      <span class="anchor">${escapeHtml(ANCHOR_HIGH)}</span>
    </div>
  </fieldset>`;
}

/** Update the progress line without rebuilding the form. */
export function updateProgressLine(root: HTMLElement, progress: ProgressInfo): void {
    const line = root.querySelector('#progress-line');
    if (line) line.textContent = progressText(progress);
}

/** Surface a rejected submission: message plus highlighted rows, with
 *  every current selection left untouched. */
export function showFormError(root: HTMLElement, message: string, fields: string[]): void {
    const banner = root.querySelector<HTMLElement>('#form-error');
    if (banner) {
        banner.textContent = message;
        banner.hidden = false;
    }
    root.querySelectorAll('fieldset.invalid').forEach(fieldset => fieldset.classList.remove('invalid'));
    for (const field of fields) {
        if (!/^[a-z_]+$/.test(field)) continue; // criterion keys only
        root.querySelector(`fieldset[data-field="${field}"]`)?.classList.add('invalid');
    }
}

export function setSubmitting(root: HTMLElement, submitting: boolean): void {
    const submit = root.querySelector<HTMLButtonElement>('#submit-evaluation');
    if (!submit) return;
    if (submitting) {
        submit.disabled = true;
    } else {
        const form = root.querySelector<HTMLFormElement>('#evaluation-form')!;
        submit.disabled = !isComplete(readForm(form));
    }
}
