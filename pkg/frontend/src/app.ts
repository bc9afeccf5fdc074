/**
 * Review session controller: fetch a blinded task, let the annotator
 * drag (or key) the candidates into a best-to-worst order, submit, and
 * advance only on acknowledgment.  A failed submit surfaces the server
 * detail verbatim and never drops the current order.
 */

import { ApiClient, ApiError, TaskPayload } from "./api.js";
import {
  OrderState,
  emptyOrder,
  isComplete,
  orderedLabels,
  placeAt,
  removeLabel,
  unranked,
} from "./ordering.js";
import { SyncedViewport } from "./viewport.js";

type Phase = "loading" | "task" | "done" | "fetchError";

export class App {
  private phase: Phase = "loading";
  private task: TaskPayload | null = null;
  private order: OrderState = emptyOrder([]);
  private completed = 0;
  private submitting = false;
  private banner: string | null = null;
  private focusLabel: string | null = null;
  readonly viewport = new SyncedViewport();

  constructor(
    private readonly api: ApiClient,
    private readonly annotatorId: string,
    private readonly root: HTMLElement,
  ) {
    root.addEventListener("keydown", (ev) => this.onKey(ev as KeyboardEvent));
  }

  async start(): Promise<void> {
    await this.reloadTask();
  }

  /** Fetch the next task; on network failure show a retry banner only. */
  async reloadTask(): Promise<void> {
    this.phase = "loading";
    this.banner = null;
    this.render();
    try {
      const task = await this.api.fetchTask(this.annotatorId);
      if (task.done) {
        this.phase = "done";
        this.task = null;
      } else {
        this.phase = "task";
        this.task = task;
        this.order = emptyOrder((task.candidates ?? []).map((c) => c.label));
        this.focusLabel = task.candidates?.[0]?.label ?? null;
        this.viewport.clearTargets();
        this.viewport.reset();
      }
    } catch {
      this.phase = "fetchError";
    }
    this.render();
  }

  /** Place a label at a tray position (drag drop or number key). */
  place(label: string, index: number): void {
    this.order = placeAt(this.order, label, index);
    this.render();
  }

  unrank(label: string): void {
    this.order = removeLabel(this.order, label);
    this.render();
  }

  /** Post the completed order; advance only after the server acks. */
  async submitCurrentOrder(): Promise<void> {
    if (this.submitting || !this.task?.imageId || !isComplete(this.order)) return;
    this.submitting = true;
    this.render();
    try {
      await this.api.submitRanking(this.annotatorId, this.task.imageId, orderedLabels(this.order));
      this.completed += 1;
      this.submitting = false;
      await this.reloadTask();
    } catch (err) {
      this.submitting = false;
      this.banner = err instanceof ApiError ? err.detail : "submission failed; check the connection";
      this.render();
    }
  }

  currentOrder(): readonly string[] {
    return this.order.tray;
  }

  private onKey(ev: KeyboardEvent): void {
    if (this.phase !== "task" || this.task === null) return;
    const labels = (this.task.candidates ?? []).map((c) => c.label);
    if (ev.key >= "1" && ev.key <= "9") {
      const rank = Number(ev.key) - 1;
      if (this.focusLabel !== null && rank < labels.length) {
        this.place(this.focusLabel, rank);
        ev.preventDefault();
      }
    } else if (ev.key === "ArrowRight" || ev.key === "ArrowLeft") {
      const at = this.focusLabel === null ? 0 : labels.indexOf(this.focusLabel);
      const next = ev.key === "ArrowRight" ? at + 1 : at - 1;
      this.focusLabel = labels[(next + labels.length) % labels.length];
      this.render();
      ev.preventDefault();
    } else if (ev.key === "Enter") {
      void this.submitCurrentOrder();
      ev.preventDefault();
    } else if (ev.key === "Backspace" && this.focusLabel !== null) {
      this.unrank(this.focusLabel);
      ev.preventDefault();
    }
  }

  private render(): void {
    this.root.textContent = "";
    switch (this.phase) {
      case "loading":
        this.root.append(el("p", "status", "loading next task"));
        return;
      case "fetchError": {
        const banner = el("div", "banner error");
        banner.append(
          el("span", "", "could not reach the review service"),
          button("Retry", () => void this.reloadTask(), "retry-fetch"),
        );
        this.root.append(banner);
        return;
      }
      case "done": {
        const done = el("section", "done");
        done.append(
          el("h1", "", "all done"),
          el("p", "", `rankings submitted this session: ${this.completed}`),
        );
        this.root.append(done);
        return;
      }
      case "task":
        this.renderTask();
    }
  }

  private renderTask(): void {
    const task = this.task;
    if (task === null) return;
    const candidates = task.candidates ?? [];
    const remaining = task.remaining ?? 0;
    const total = this.completed + remaining;

    const header = el("header", "");
    header.append(
      el("h1", "", "rank the cutouts, best first"),
      el("p", "progress", `progress: ${this.completed} of ${total}`),
      el(
        "p",
        "hint",
        "drag a card into the tray, or focus it and press a number key; Enter submits",
      ),
    );
    this.root.append(header);

    if (this.banner !== null) {
      const banner = el("div", "banner error");
      banner.append(
        el("span", "", this.banner),
        button("Retry", () => void this.submitCurrentOrder(), "retry-submit"),
      );
      this.root.append(banner);
    }

    const compare = el("main", "compare");
    const originalPane = el("div", "pane original");
    if (task.original) {
      const img = document.createElement("img");
      img.src = this.api.assetUrl(task.original);
      img.alt = "original image";
      const content = el("div", "content");
      content.append(img);
      originalPane.append(el("figcaption", "", "original"), content);
      this.viewport.attach(originalPane, content);
    }
    compare.append(originalPane);

    for (const candidate of candidates) {
      const card = el("figure", "card pane");
      card.dataset.label = candidate.label;
      card.tabIndex = 0;
      if (candidate.label === this.focusLabel) card.classList.add("focused");
      card.draggable = true;
      card.addEventListener("dragstart", (ev) => {
        (ev as DragEvent).dataTransfer?.setData("text/plain", candidate.label);
      });
      card.addEventListener("focus", () => {
        this.focusLabel = candidate.label;
      });
      card.addEventListener("click", () => {
        this.focusLabel = candidate.label;
        this.render();
      });

      const rank = this.order.tray.indexOf(candidate.label);
      const badge = el("span", "rank-badge", rank >= 0 ? `rank ${rank + 1}` : "unranked");
      const caption = el("figcaption", "label");
      caption.append(el("strong", "", candidate.label), badge);
      const content = el("div", "content");
      const img = document.createElement("img");
      img.src = this.api.assetUrl(candidate.asset);
      img.alt = `candidate ${candidate.label}`;
      content.append(img);
      card.append(caption, content);
      this.viewport.attach(card, content);
      compare.append(card);
    }
    this.root.append(compare);

    const tray = el("section", "tray");
    tray.append(el("h2", "", "your ranking (best first)"));
    const slots = el("ol", "slots");
    for (let i = 0; i < candidates.length; i++) {
      const slot = el("li", "slot");
      slot.dataset.index = String(i);
      const occupant = this.order.tray[i];
      if (occupant !== undefined) {
        const chip = el("span", "chip", occupant);
        chip.draggable = true;
        chip.addEventListener("dragstart", (ev) => {
          (ev as DragEvent).dataTransfer?.setData("text/plain", occupant);
        });
        chip.addEventListener("dblclick", () => this.unrank(occupant));
        slot.append(chip);
      } else {
        slot.append(el("span", "placeholder", `rank ${i + 1}`));
      }
      slot.addEventListener("dragover", (ev) => ev.preventDefault());
      slot.addEventListener("drop", (ev) => {
        ev.preventDefault();
        const label = (ev as DragEvent).dataTransfer?.getData("text/plain");
        if (label) this.place(label, i);
      });
      slots.append(slot);
    }
    tray.append(slots);
    const pool = unranked(this.order);
    if (pool.length > 0) {
      tray.append(el("p", "pool", `unranked: ${pool.join(", ")}`));
    }
    this.root.append(tray);

    const footer = el("footer", "");
    const submit = button(
      this.submitting ? "submitting" : "Submit ranking",
      () => void this.submitCurrentOrder(),
      "submit",
    );
    submit.disabled = !isComplete(this.order) || this.submitting;
    footer.append(submit, button("Reset zoom", () => this.viewport.reset(), "reset-zoom"));
    this.root.append(footer);
  }
}

function el(tag: string, className: string, text?: string): HTMLElement {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function button(text: string, onClick: () => void, id: string): HTMLButtonElement {
  const node = document.createElement("button");
  node.id = id;
  node.type = "button";
  node.textContent = text;
  node.addEventListener("click", onClick);
  return node;
}
