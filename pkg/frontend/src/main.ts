import { ApiClient } from "./api.js";
import { mountApp } from "./app.js";
import { SessionStore } from "./session.js";

function serviceUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("service");
  if (fromQuery) {
    localStorage.setItem("wnnrec-service", fromQuery);
    return fromQuery;
  }
  return localStorage.getItem("wnnrec-service") ?? "http://127.0.0.1:8000";
}

async function boot(): Promise<void> {
  const api = new ApiClient(serviceUrl());
  const session = new SessionStore(api);
  const root = document.getElementById("app")!;
  mountApp(root, api, session);

  const savedAgent = localStorage.getItem("wnnrec-agent");
  try {
    if (savedAgent) {
      await session.resume(savedAgent);
    } else {
      await session.start();
      localStorage.setItem("wnnrec-agent", session.view!.agentId);
    }
  } catch {
    // Saved agent may be gone (service wiped); start a fresh one.
    await session.start();
    localStorage.setItem("wnnrec-agent", session.view!.agentId);
  }
}

void boot();
