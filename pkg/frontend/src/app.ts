import { AnnotationSession } from './state.js';
import type { Side } from './types.js';

// Judging criteria, shown on every judging screen.
const CRITERIA = [
  'Ακρίβεια: περιέχει η περίληψη σωστά γεγονότα;',
  'Πληροφορητικότητα: αποτυπώνονται οι σημαντικές πληροφορίες;',
  'Ροή λόγου: είναι γραμμένη σε καλά διατυπωμένα ελληνικά;',
];

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

/** Mount the annotation view onto `root` and keep it in sync with the session. */
export function mountApp(root: HTMLElement, session: AnnotationSession): void {
  const doc = root.ownerDocument;
  session.subscribe(() => render(root, session));
  render(root, session);

  root.addEventListener('click', (event) => {
    const target = event.target as HTMLElement | null;
    const action = target?.getAttribute?.('data-action');
    if (!action) {
      return;
    }
    const side = target?.getAttribute('data-side') as Side | null;
    if (action === 'best' && side) {
      session.selectBest(side);
    } else if (action === 'worst' && side) {
      session.selectWorst(side);
    } else if (action === 'submit') {
      void session.submit();
    } else if (action === 'retry') {
      void session.retry();
    }
  });

  function render(container: HTMLElement, s: AnnotationSession): void {
    const state = s.state;
    container.textContent = '';
    const progress = el(doc, 'div', { 'data-testid': 'progress' },
      `Πρόοδος: ${Math.round(state.progress * 100)}%`);
    container.appendChild(progress);

    if (state.notice) {
      container.appendChild(el(doc, 'div', { 'data-testid': 'notice', class: 'notice' }, state.notice));
    }

    if (state.phase === 'loading') {
      container.appendChild(el(doc, 'div', { 'data-testid': 'loading' }, 'Φόρτωση…'));
      return;
    }
    if (state.phase === 'done') {
      container.appendChild(
        el(doc, 'div', { 'data-testid': 'done' }, 'Τέλος! Δεν υπάρχουν άλλα ζεύγη. Ευχαριστούμε.'),
      );
      return;
    }
    if (state.phase === 'error') {
      container.appendChild(
        el(doc, 'div', { 'data-testid': 'error' }, state.errorMessage ?? 'Σφάλμα δικτύου'),
      );
      container.appendChild(el(doc, 'button', { 'data-action': 'retry', 'data-testid': 'retry' }, 'Δοκιμή ξανά'));
      return;
    }

    const pair = state.pair;
    if (!pair) {
      return;
    }
    const busy = state.phase === 'submitting';

    const criteria = el(doc, 'ul', { 'data-testid': 'criteria' });
    for (const line of CRITERIA) {
      criteria.appendChild(el(doc, 'li', {}, line));
    }
    container.appendChild(criteria);

    container.appendChild(
      el(doc, 'article', { 'data-testid': 'document', lang: 'el' }, pair.document_text),
    );

    for (const side of ['left', 'right'] as Side[]) {
      const panel = el(doc, 'section', { 'data-testid': `summary-${side}`, lang: 'el' });
      panel.appendChild(
        el(doc, 'p', {}, side === 'left' ? pair.summary_left : pair.summary_right),
      );
      const bestAttrs: Record<string, string> = {
        'data-action': 'best',
        'data-side': side,
        'data-testid': `best-${side}`,
      };
      if (busy) {
        bestAttrs.disabled = '';
      }
      if (state.best === side) {
        bestAttrs['aria-pressed'] = 'true';
      }
      panel.appendChild(el(doc, 'button', bestAttrs, 'Καλύτερη'));

      const worstAttrs: Record<string, string> = {
        'data-action': 'worst',
        'data-side': side,
        'data-testid': `worst-${side}`,
      };
      // the side already chosen as best is not offered as worst
      if (busy || state.best === side) {
        worstAttrs.disabled = '';
      }
      if (state.worst === side) {
        worstAttrs['aria-pressed'] = 'true';
      }
      panel.appendChild(el(doc, 'button', worstAttrs, 'Χειρότερη'));
      container.appendChild(panel);
    }

    const submitAttrs: Record<string, string> = {
      'data-action': 'submit',
      'data-testid': 'submit',
    };
    if (busy || !s.canSubmit()) {
      submitAttrs.disabled = '';
    }
    container.appendChild(el(doc, 'button', submitAttrs, busy ? 'Αποστολή…' : 'Υποβολή'));
  }
}
