/** Cross-view coordination bus.
 *
 * One handler per (channel, member view); publishing delivers an event to
 * every member except its origin, so propagation touches each view at
 * most once and cannot loop.
 */

import type { LinkEvent } from "./types";

type Handler = (event: LinkEvent) => void;

export class LinkBus {
  private handlers = new Map<string, Map<string, Handler>>();

  subscribe(channel: string, viewId: string, handler: Handler): void {
    if (!this.handlers.has(channel)) this.handlers.set(channel, new Map());
    this.handlers.get(channel)!.set(viewId, handler);
  }

  unsubscribe(viewId: string): void {
    this.handlers.forEach((byView) => byView.delete(viewId));
  }

  publish(event: LinkEvent): void {
    const byView = this.handlers.get(event.channel);
    if (!byView) return; // unknown channels are ignored
    byView.forEach((handler, viewId) => {
      if (viewId !== event.origin) handler(event);
    });
  }

  channels(): string[] {
    return [...this.handlers.keys()];
  }
}
