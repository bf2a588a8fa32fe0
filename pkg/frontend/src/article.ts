// Article page: the server-rendered hyperlinked document plus an editor
// for whichever item the reader selects. Annotation blocks arrive as
// verbatim LaTeX and are rendered client-side.

import type { ApiClient } from './api';
import { mountEditor } from './editor';
import { renderMathIn } from './math';

export interface ArticlePageHandle {
  root: HTMLElement;
  load(): Promise<void>;
  openEditor(anchor: string): Promise<void>;
}

export function mountArticlePage(
  container: HTMLElement,
  api: ApiClient,
  name: string,
): ArticlePageHandle {
  const root = document.createElement('section');
  root.className = 'article-page';
  root.innerHTML = `
    <div class="article-frozen-banner" hidden>
      This article has unresolved merge conflicts; annotations are frozen
      until an administrator resolves them.
    </div>
    <div class="article-document"></div>
    <aside class="article-editor-pane"></aside>
  `;
  container.appendChild(root);

  const documentPane = root.querySelector<HTMLElement>('.article-document')!;
  const editorPane = root.querySelector<HTMLElement>('.article-editor-pane')!;
  const banner = root.querySelector<HTMLElement>('.article-frozen-banner')!;

  async function load(): Promise<void> {
    const view = await api.getArticle(name);
    banner.hidden = !view.frozen;
    documentPane.innerHTML = view.document;
    for (const annotation of documentPane.querySelectorAll('.annotation')) {
      renderMathIn(annotation);
    }
    // directive links navigate within the app
    for (const link of documentPane.querySelectorAll<HTMLAnchorElement>('a.article-link')) {
      const target = link.getAttribute('href')!;
      link.setAttribute('href', `#/article/${target}`);
    }
    // clicking an item opens its editor
    for (const item of documentPane.querySelectorAll<HTMLElement>('.item')) {
      item.addEventListener('click', () => void openEditor(item.id));
      item.classList.add('item-clickable');
      item.title = 'Annotate this item';
    }
  }

  async function openEditor(anchor: string): Promise<void> {
    editorPane.innerHTML = '';
    const editor = mountEditor(editorPane, api, anchor, () => void load());
    await editor.refresh();
  }

  return { root, load, openEditor };
}
