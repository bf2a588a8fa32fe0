// Client-side LaTeX rendering: comments are stored verbatim and rendered in
// the browser. $...$ is inline math, $$...$$ display math; anything outside
// math segments is plain text.

import katex from 'katex';

const SEGMENT = /\$\$([^$]+)\$\$|\$([^$\n]+)\$/g;

export function renderMathToHtml(source: string): string {
  let html = '';
  let last = 0;
  for (const match of source.matchAll(SEGMENT)) {
    html += escapeHtml(source.slice(last, match.index));
    const [, display, inline] = match;
    const tex = display ?? inline ?? '';
    try {
      html += katex.renderToString(tex, {
        displayMode: display !== undefined,
        throwOnError: true,
      });
    } catch {
      html += `<code class="math-error">${escapeHtml(match[0])}</code>`;
    }
    last = (match.index ?? 0) + match[0].length;
  }
  html += escapeHtml(source.slice(last));
  return html.replace(/\n/g, '<br>');
}

export function renderMathIn(element: Element): void {
  element.innerHTML = renderMathToHtml(element.textContent ?? '');
}

function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}
