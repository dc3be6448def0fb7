import { CRITERION_KEYS } from '../src/rubric.js';

export function flush(times = 4): Promise<void> {
    let chain = Promise.resolve();
    for (let i = 0; i < times; i += 1) {
        chain = chain.then(() => new Promise<void>(resolve => setTimeout(resolve, 0)));
    }
    return chain;
}

export function typeName(root: HTMLElement, name: string): void {
    const input = root.querySelector<HTMLInputElement>('#evaluator-name')!;
    input.value = name;
    input.dispatchEvent(new Event('input', { bubbles: true }));
}

export async function chooseFile(root: HTMLElement, csv: string): Promise<void> {
    const input = root.querySelector<HTMLInputElement>('#csv-file')!;
    const file = new File([csv], 'notes.csv', { type: 'text/csv' });
    Object.defineProperty(input, 'files', { value: [file], configurable: true });
    input.dispatchEvent(new Event('change', { bubbles: true }));
    await flush();
}

export function pickScore(root: HTMLElement, key: string, value: number): void {
    const radio = root.querySelector<HTMLInputElement>(
        `input[name="criterion-${key}"][value="${value}"]`,
    )!;
    radio.checked = true;
    radio.dispatchEvent(new Event('change', { bubbles: true }));
}

export function pickOrigin(root: HTMLElement, value: string): void {
    const radio = root.querySelector<HTMLInputElement>(
        `input[name="origin"][value="${value}"]`,
    )!;
    radio.checked = true;
    radio.dispatchEvent(new Event('change', { bubbles: true }));
}

export function fillWholeForm(root: HTMLElement, value = 4, origin = 'human'): void {
    for (const key of CRITERION_KEYS) pickScore(root, key, value);
    pickOrigin(root, origin);
}

export function submitButton(root: HTMLElement): HTMLButtonElement {
    return root.querySelector<HTMLButtonElement>('#submit-evaluation')!;
}

export function clickSubmit(root: HTMLElement): void {
    const form = root.querySelector<HTMLFormElement>('#evaluation-form')!;
    form.dispatchEvent(new Event('submit', { bubbles: true, cancelable: true }));
}

export const THREE_ROW_CSV = [
    'filename,description,mrn,note',
    'note1.txt,Primary Care Follow-up Visit,MRN12345678,"Patient seen for follow-up. BP 138/82, stable."',
    'note2.txt,Cardiology consult,MRN0002,Echo reviewed; EF preserved.',
    'note3.txt,Discharge summary,MRN0003,Discharged home in stable condition.',
    '',
].join('\n');
