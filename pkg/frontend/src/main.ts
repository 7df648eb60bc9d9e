import { BwsClient } from './api.js';
import { mountApp } from './app.js';
import { AnnotationSession } from './state.js';

// Configuration arrives via the query string:
//   ?service=http://host:port&study=<id>&annotator=<token>
// The service defaults to the page's own origin (the API can mount this UI).
function configFromQuery(search: string, origin: string) {
  const params = new URLSearchParams(search);
  const study = params.get('study');
  const annotator = params.get('annotator');
  if (!study || !annotator) {
    return null;
  }
  return {
    baseUrl: params.get('service') ?? origin,
    studyId: study,
    annotator,
  };
}

const root = document.getElementById('app');
if (root) {
  const config = configFromQuery(window.location.search, window.location.origin);
  if (!config) {
    root.textContent =
      'Λείπουν παράμετροι: ?study=<id>&annotator=<token>[&service=<url>]';
  } else {
    const session = new AnnotationSession(new BwsClient(config));
    mountApp(root, session);
    void session.start();
  }
}
