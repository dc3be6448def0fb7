import { EXPORT_URL, ResultEntry, SummaryPayload } from '../api.js';
import { escapeHtml } from '../dom.js';
import { CRITERIA, LabelStyle, displayLabel } from '../rubric.js';

export interface ResultsContext {
    entries: ResultEntry[];
    summary: SummaryPayload;
    labelStyle: LabelStyle;
    onBackHome(): void;
}

export function renderResults(root: HTMLElement, ctx: ResultsContext): void {
    root.innerHTML = `
<header>
  <h1>Evaluation Results</h1>
  <nav>
    <button id="nav-home" type="button">Back to Home</button>
    <a id="download-export" href="${EXPORT_URL}" download="evaluation_results.csv">Download CSV</a>
  </nav>
</header>
<section class="card" id="results-table">${table(ctx.entries)}</section>
<section class="card" id="summary-panel">${summaryPanel(ctx.summary, ctx.labelStyle)}</section>`;

    root.querySelector<HTMLButtonElement>('#nav-home')!.addEventListener('click', ctx.onBackHome);
}

function table(entries: ResultEntry[]): string {
    if (entries.length === 0) {
        return '<p class="empty">No evaluations yet.</p>';
    }
    const headers = CRITERIA.map(
        criterion => `<th title="${escapeHtml(criterion.label)}">${criterion.ordinal}</th>`,
    ).join('');
    const rows = entries
        .map(entry => {
            const scores = CRITERIA.map(criterion => `<td>${entry[criterion.key]}</td>`).join('');
            return `<tr>
        <td>${escapeHtml(entry.filename)}</td>
        <td>${escapeHtml(entry.evaluator)}</td>
        <td>${escapeHtml(entry.timestamp)}</td>
        ${scores}
        <td class="total">${entry.total_score}</td>
        <td>${escapeHtml(entry.origin_assessment)}</td>
      </tr>`;
        })
        .join('');
    return `<table>
  <thead><tr><th>Filename</th><th>Evaluator</th><th>Timestamp</th>${headers}<th>Total</th><th>Origin</th></tr></thead>
  <tbody>${rows}</tbody>
</table>`;
}

function formatNumber(value: number | null, digits = 2): string {
    return value === null ? '-' : value.toFixed(digits);
}

function summaryPanel(summary: SummaryPayload, style: LabelStyle): string {
    const criteriaRows = summary.criteria
        .map(entry => {
            const criterion = CRITERIA.find(c => c.key === entry.key);
            const label = criterion ? displayLabel(criterion, style) : entry.key;
            return `<tr><td>${escapeHtml(label)}</td><td>${entry.n}</td>` +
                `<td>${formatNumber(entry.mean)}</td><td>${formatNumber(entry.sd)}</td></tr>`;
        })
        .join('');
    const overall = summary.totals.overall;
    const byOrigin = Object.entries(summary.totals.by_origin)
        .map(
            ([label, stats]) =>
                `<tr><td>${escapeHtml(label)}</td><td>${stats.n}</td>` +
                `<td>${formatNumber(stats.mean)}</td><td>${formatNumber(stats.sd)}</td></tr>`,
        )
        .join('');
    const welch = summary.comparison.welch;
    const anova = summary.comparison.anova;
    const agreement = summary.agreement;
    return `
<h2>Summary</h2>
<p>${summary.evaluation_count} evaluations by ${summary.evaluator_count} evaluator(s)
   over ${summary.document_count} document(s).
   Overall total score: mean ${formatNumber(overall.mean)}, sd ${formatNumber(overall.sd)}.</p>
<table class="mini">
  <thead><tr><th>Criterion</th><th>n</th><th>mean</th><th>sd</th></tr></thead>
  <tbody>${criteriaRows}</tbody>
</table>
<h3>Totals by assessed origin</h3>
<table class="mini">
  <thead><tr><th>Origin</th><th>n</th><th>mean</th><th>sd</th></tr></thead>
  <tbody>${byOrigin}</tbody>
</table>
<p id="comparison-line">${
        welch
            ? `Welch t-test (human vs ai): t=${welch.t.toFixed(3)}, p=${welch.p.toFixed(4)}.`
            : 'Group comparison not available yet.'
    }${anova ? ` ANOVA: F=${anova.f.toFixed(3)}, p=${anova.p.toFixed(4)}.` : ''}</p>
<p id="agreement-line">${
        agreement
            ? `Inter-rater agreement over ${agreement.pair_count} rater pair(s).`
            : 'Inter-rater agreement not available yet.'
    }</p>`;
}
