"""Render a parsed article as a hyperlinked HTML fragment.

Directive names resolving to corpus articles become links, each item gets an
element whose id is its anchor, and comment bodies are emitted verbatim
(HTML-escaped, LaTeX untouched) in an annotation block directly above their
item so a client-side math renderer can process them.
"""

from __future__ import annotations

import html
from collections.abc import Iterable, Mapping

from .articles import Article
from .errors import UnknownAnchor


def render_article(
    article: Article,
    corpus: Iterable[str],
    comments: Mapping[str, str] | None = None,
) -> str:
    comments = dict(comments or {})
    known = {item.anchor for item in article.items}
    for anchor in comments:
        if anchor not in known:
            raise UnknownAnchor(anchor)
    corpus = set(corpus)

    out: list[str] = []
    out.append(f'<article class="library-article" data-name="{article.name}">')
    out.append(f"<h1>{html.escape(article.name)}</h1>")

    out.append('<section class="environment">')
    for directive in article.env:
        parts = []
        for name in directive.names:
            escaped = html.escape(name)
            if name in corpus:
                parts.append(f'<a class="article-link" href="{escaped}">{escaped}</a>')
            else:
                parts.append(f'<span class="article-name">{escaped}</span>')
        out.append(
            f'<p class="directive"><span class="directive-kind">{directive.kind}'
            f"</span> {', '.join(parts)};</p>"
        )
    out.append("</section>")

    out.append('<section class="body">')
    starts = {item.span[0]: item for item in article.items}
    lineno = 1
    plain: list[str] = []

    def flush_plain() -> None:
        if any(s.strip() for s in plain):
            out.append('<pre class="source">' + html.escape("\n".join(plain)) + "</pre>")
        plain.clear()

    while lineno <= len(article.lines):
        item = starts.get(lineno)
        if item is None:
            plain.append(article.lines[lineno - 1])
            lineno += 1
            continue
        flush_plain()
        if item.anchor in comments:
            out.append(
                f'<div class="annotation" data-anchor="{html.escape(item.anchor)}">'
                + html.escape(comments[item.anchor])
                + "</div>"
            )
        text = "\n".join(article.lines[item.span[0] - 1 : item.span[1]])
        out.append(
            f'<pre class="item" id="{html.escape(item.anchor)}" '
            f'data-kind="{item.kind}" data-label="{html.escape(item.label)}">'
            + html.escape(text)
            + "</pre>"
        )
        lineno = item.span[1] + 1
    flush_plain()
    out.append("</section>")
    out.append("</article>")
    return "\n".join(out)
