// Defense-in-depth for server-provided HTML: only {p, strong, mark, u, br}
// elements survive, with every attribute stripped. The service already
// whitelists markup; this guards the UI even if that ever regresses.

const ALLOWED_TAGS = new Set(["P", "STRONG", "MARK", "U", "BR"]);

// Containers whose text is code or metadata, never content: removed whole.
const DROPPED_WITH_CONTENT = new Set([
  "SCRIPT",
  "STYLE",
  "HEAD",
  "TITLE",
  "META",
  "LINK",
  "IFRAME",
  "OBJECT",
  "EMBED",
  "NOSCRIPT",
]);

/**
 * Reduce arbitrary HTML to whitelisted markup plus text.
 *
 * Allowed elements are rebuilt bare (no attributes); unknown elements are
 * unwrapped so their visible text is kept; script/style-like containers
 * disappear entirely. Parsing happens in an inert <template>, so nothing
 * executes.
 */
export function sanitizeHtml(html: string, doc: Document = document): string {
  const template = doc.createElement("template");
  template.innerHTML = html;
  const container = doc.createElement("div");
  copySanitized(template.content, container, doc);
  return container.innerHTML;
}

function copySanitized(source: Node, target: Node, doc: Document): void {
  for (const child of Array.from(source.childNodes)) {
    if (child.nodeType === doc.TEXT_NODE) {
      target.appendChild(doc.createTextNode(child.textContent ?? ""));
      continue;
    }
    if (child.nodeType !== doc.ELEMENT_NODE) {
      continue; // comments, processing instructions
    }
    const element = child as Element;
    if (DROPPED_WITH_CONTENT.has(element.tagName)) {
      continue;
    }
    if (ALLOWED_TAGS.has(element.tagName)) {
      const clean = doc.createElement(element.tagName.toLowerCase());
      copySanitized(element, clean, doc);
      target.appendChild(clean);
    } else {
      copySanitized(element, target, doc);
    }
  }
}
