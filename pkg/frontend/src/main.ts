import { ApiClient } from "./api.js";
import { App } from "./app.js";

function annotatorId(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("annotator");
  if (fromQuery) return fromQuery;
  const stored = window.localStorage.getItem("annotatorId");
  if (stored) return stored;
  const generated = `anon-${Math.random().toString(36).slice(2, 8)}`;
  window.localStorage.setItem("annotatorId", generated);
  return generated;
}

const root = document.getElementById("app");
if (root === null) throw new Error("missing #app mount point");
void new App(new ApiClient(""), annotatorId(), root).start();
