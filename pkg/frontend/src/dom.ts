export function escapeHtml(text: string): string {
    return text
        .replace(/&/g, '&amp;')
        .replace(/</g, '&lt;')
        .replace(/>/g, '&gt;')
        .replace(/"/g, '&quot;')
        .replace(/'/g, '&#39;');
}

export function escapeAttr(text: string): string {
    return escapeHtml(text);
}

export function progressText(progress: { completed: number; total: number; percent: number }): string {
    return `Progress: ${progress.completed} of ${progress.total} documents evaluated (${progress.percent}%)`;
}
