// Comment editor: a textarea bound to a live preview pane, plus the
// revision history with rollback. Every keystroke re-renders the preview;
// saving posts a new revision and refreshes the history.

import type { ApiClient } from './api';
import { ApiError } from './api';
import { renderMathToHtml } from './math';

export interface EditorHandle {
  root: HTMLElement;
  refresh(): Promise<void>;
}

export function mountEditor(
  container: HTMLElement,
  api: ApiClient,
  anchor: string,
  onSaved?: () => void,
): EditorHandle {
  const root = document.createElement('section');
  root.className = 'comment-editor';
  root.innerHTML = `
    <h3>Annotation for <code class="editor-anchor"></code></h3>
    <textarea class="editor-input" rows="6"
      placeholder="LaTeX welcome: $x \\in y$"></textarea>
    <div class="editor-preview" aria-label="preview"></div>
    <div class="editor-actions">
      <button class="editor-save">Save</button>
      <span class="editor-status"></span>
    </div>
    <details class="editor-history-box" open>
      <summary>History</summary>
      <ol class="editor-history"></ol>
    </details>
  `;
  container.appendChild(root);

  root.querySelector('.editor-anchor')!.textContent = anchor;
  const input = root.querySelector<HTMLTextAreaElement>('.editor-input')!;
  const preview = root.querySelector<HTMLElement>('.editor-preview')!;
  const status = root.querySelector<HTMLElement>('.editor-status')!;
  const historyList = root.querySelector<HTMLOListElement>('.editor-history')!;

  const renderPreview = () => {
    preview.innerHTML = renderMathToHtml(input.value);
  };
  input.addEventListener('input', renderPreview);

  async function refreshHistory(): Promise<void> {
    const { revisions } = await api.commentHistory(anchor);
    historyList.innerHTML = '';
    for (const revision of [...revisions].reverse()) {
      const item = document.createElement('li');
      item.className = 'history-entry';
      item.dataset.revision = String(revision.revision_id);
      const meta = document.createElement('span');
      meta.textContent = `r${revision.revision_id} by ${revision.author}` +
        (revision.deleted ? ' (deleted)' : '');
      const restore = document.createElement('button');
      restore.className = 'history-restore';
      restore.textContent = 'Restore';
      restore.addEventListener('click', async () => {
        try {
          const restored = await api.rollbackComment(anchor, revision.revision_id);
          input.value = restored.body;
          renderPreview();
          status.textContent = `restored r${revision.revision_id} as r${restored.revision_id}`;
          await refreshHistory();
        } catch (err) {
          status.textContent = describe(err);
        }
      });
      item.append(meta, ' ', restore);
      historyList.appendChild(item);
    }
  }

  root.querySelector('.editor-save')!.addEventListener('click', async () => {
    try {
      const revision = await api.saveComment(anchor, input.value);
      status.textContent = `saved r${revision.revision_id}`;
      await refreshHistory();
      onSaved?.();
    } catch (err) {
      status.textContent = describe(err);
    }
  });

  async function refresh(): Promise<void> {
    const { revision } = await api.latestComment(anchor);
    if (revision && !revision.deleted) {
      input.value = revision.body;
      renderPreview();
    }
    await refreshHistory();
  }

  return { root, refresh };
}

function describe(err: unknown): string {
  if (err instanceof ApiError) {
    if (err.status === 401) return 'sign in with a token first';
    return `error ${err.status}: ${err.message}`;
  }
  return String(err);
}
