import { ANCHOR_HIGH, ANCHOR_LOW } from '../rubric.js';

export interface InstructionsContext {
    onBackHome(): void;
}

export function renderInstructions(root: HTMLElement, ctx: InstructionsContext): void {
    root.innerHTML = `
<header>
  <h1>Instructions</h1>
  <nav><button id="nav-home" type="button">Back to Home</button></nav>
</header>
<section class="card">
  <ol>
    <li>Enter your name and upload a CSV corpus with columns
        <code>filename</code>, <code>description</code>, <code>mrn</code>,
        <code>note</code>.</li>
    <li>Notes are shown one at a time. The description and MRN appear above
        the note so you can check the source information.</li>
    <li>Rate each of the nine quality criteria from 1 (${ANCHOR_LOW}) to
        5 (${ANCHOR_HIGH}).</li>
    <li>State whether you believe the note was written by a human, generated
        by AI, or whether you cannot tell.</li>
    <li>Submit and continue until every note is evaluated; progress is shown
        at the top. You can review all evaluations and download them as CSV
        from the results page.</li>
  </ol>
</section>`;
    root.querySelector<HTMLButtonElement>('#nav-home')!.addEventListener('click', ctx.onBackHome);
}
