/**
 * Evaluation form state: nine Likert selections plus the origin call,
 * all initially unselected. Submission is possible only when every one
 * of them is selected.
 */

import { CRITERION_KEYS } from './rubric.js';

export interface FormState {
    scores: Partial<Record<string, number>>;
    origin: string | null;
}

export function emptyForm(): FormState {
    return { scores: {}, origin: null };
}

export function isComplete(form: FormState): boolean {
    return (
        form.origin !== null &&
        CRITERION_KEYS.every(key => typeof form.scores[key] === 'number')
    );
}

/** Read the current selections from the rendered radio groups. */
export function readForm(root: ParentNode): FormState {
    const form = emptyForm();
    for (const key of CRITERION_KEYS) {
        const checked = root.querySelector<HTMLInputElement>(
            `input[name="criterion-${key}"]:checked`,
        );
        if (checked) form.scores[key] = Number(checked.value);
    }
    const origin = root.querySelector<HTMLInputElement>('input[name="origin"]:checked');
    form.origin = origin ? origin.value : null;
    return form;
}

export function completeScores(form: FormState): Record<string, number> {
    const scores: Record<string, number> = {};
    for (const key of CRITERION_KEYS) {
        const value = form.scores[key];
        if (typeof value !== 'number') throw new Error(`criterion ${key} is unselected`);
        scores[key] = value;
    }
    return scores;
}
