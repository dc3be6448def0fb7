/**
 * The nine rating criteria and the origin question as rendered to
 * evaluators. Wording is configurable: the evaluator-facing variant is
 * the default; the canonical variant matches the server's criterion
 * labels one for one. Keys are the stable identifiers the API expects.
 */

export type LabelStyle = 'evaluator' | 'canonical';

export interface Criterion {
    ordinal: number;
    key: string;
    label: string;
    description: string;
    evaluatorLabel?: string;
    evaluatorDescription?: string;
}

export const CRITERIA: Criterion[] = [
    {
        ordinal: 1,
        key: 'up_to_date',
        label: 'Up-to-date',
        description: 'The note reflects the inclusion of the most recent patient information.',
    },
    {
        ordinal: 2,
        key: 'accurate',
        label: 'Accurate',
        description: 'The note is factually correct and free of errors.',
    },
    {
        ordinal: 3,
        key: 'thorough',
        label: 'Thorough',
        description: 'The note is complete and addresses all relevant patient issues.',
    },
    {
        ordinal: 4,
        key: 'useful',
        label: 'Useful',
        description: 'The information is relevant and valuable for clinical decision-making.',
    },
    {
        ordinal: 5,
        key: 'organized',
        label: 'Organized',
        description: 'The note is logically structured and well arranged.',
    },
    {
        ordinal: 6,
        key: 'comprehensible',
        label: 'Comprehensible',
        description: 'The note is clear and easy to understand.',
    },
    {
        ordinal: 7,
        key: 'succinct',
        label: 'Succinct',
        description: 'The note is brief, to the point, and without redundancy.',
        evaluatorLabel: 'Concise',
    },
    {
        ordinal: 8,
        key: 'synthesized',
        label: 'Synthesized',
        description: 'The note integrates the available information into a coherent assessment and plan of care.',
        evaluatorLabel: 'Thoughtful',
        evaluatorDescription:
            "The note reflects the author's understanding of the patient's status and ability to develop a plan of care.",
    },
    {
        ordinal: 9,
        key: 'internally_consistent',
        label: 'Internally consistent',
        description: 'No part of the note ignores or contradicts any other part.',
    },
];

export const CRITERION_KEYS = CRITERIA.map(c => c.key);

export const LIKERT_VALUES = [1, 2, 3, 4, 5];
export const ANCHOR_LOW = 'Not at all';
export const ANCHOR_HIGH = 'Extremely';

export const ORIGIN_OPTIONS: Array<{ value: string; label: string }> = [
    { value: 'human', label: 'Human written note' },
    { value: 'ai', label: 'Generative AI note' },
    { value: 'unsure', label: 'I am not sure' },
];

export function displayLabel(criterion: Criterion, style: LabelStyle): string {
    if (style === 'evaluator' && criterion.evaluatorLabel) return criterion.evaluatorLabel;
    return criterion.label;
}

export function displayDescription(criterion: Criterion, style: LabelStyle): string {
    if (style === 'evaluator' && criterion.evaluatorDescription) return criterion.evaluatorDescription;
    return criterion.description;
}

/** Wording style, overridable before the bundle loads:
 *  `window.NOTEVAL_CONFIG = { labelStyle: 'canonical' }` */
export function configuredLabelStyle(): LabelStyle {
    const config = (globalThis as { NOTEVAL_CONFIG?: { labelStyle?: string } }).NOTEVAL_CONFIG;
    return config?.labelStyle === 'canonical' ? 'canonical' : 'evaluator';
}
