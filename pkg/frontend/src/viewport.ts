/**
 * One zoom/pan state shared by every candidate card, so boundary
 * quality can be compared pixel-for-pixel across models.
 */

export interface ViewportState {
  scale: number;
  x: number;
  y: number;
}

const MIN_SCALE = 1;
const MAX_SCALE = 16;

export class SyncedViewport {
  private state: ViewportState = { scale: 1, x: 0, y: 0 };
  private targets = new Set<HTMLElement>();
  private dragging = false;
  private lastX = 0;
  private lastY = 0;

  get current(): ViewportState {
    return { ...this.state };
  }

  /** Register a pane; wheel zooms and pointer-drag pans all panes. */
  attach(pane: HTMLElement, content: HTMLElement): void {
    this.targets.add(content);
    pane.addEventListener("wheel", (ev) => {
      ev.preventDefault();
      this.zoomBy(ev.deltaY < 0 ? 1.25 : 0.8);
    });
    pane.addEventListener("pointerdown", (ev) => {
      this.dragging = true;
      this.lastX = ev.clientX;
      this.lastY = ev.clientY;
    });
    pane.addEventListener("pointermove", (ev) => {
      if (!this.dragging) return;
      this.panBy(ev.clientX - this.lastX, ev.clientY - this.lastY);
      this.lastX = ev.clientX;
      this.lastY = ev.clientY;
    });
    for (const type of ["pointerup", "pointerleave"] as const) {
      pane.addEventListener(type, () => {
        this.dragging = false;
      });
    }
    this.apply();
  }

  zoomBy(factor: number): void {
    const scale = Math.min(MAX_SCALE, Math.max(MIN_SCALE, this.state.scale * factor));
    if (scale === MIN_SCALE) {
      this.state = { scale: MIN_SCALE, x: 0, y: 0 };
    } else {
      this.state = { ...this.state, scale };
    }
    this.apply();
  }

  panBy(dx: number, dy: number): void {
    if (this.state.scale === MIN_SCALE) return;
    this.state = { ...this.state, x: this.state.x + dx, y: this.state.y + dy };
    this.apply();
  }

  reset(): void {
    this.state = { scale: 1, x: 0, y: 0 };
    this.apply();
  }

  /** Drop panes from a previous task. */
  clearTargets(): void {
    this.targets.clear();
  }

  private apply(): void {
    const { scale, x, y } = this.state;
    for (const el of this.targets) {
      el.style.transform = `translate(${x}px, ${y}px) scale(${scale})`;
    }
  }
}
