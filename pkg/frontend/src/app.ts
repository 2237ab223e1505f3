import type { RecommenderApi } from "./api.js";
import { SessionStore } from "./session.js";
import type { MovieSummary } from "./types.js";

const RATINGS = [0.5, 1, 1.5, 2, 2.5, 3, 3.5, 4, 4.5, 5];

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

/** Wire the whole screen; all state lives in the SessionStore. */
export function mountApp(root: HTMLElement, api: RecommenderApi, session: SessionStore): void {
  root.innerHTML = "";
  const banner = el("div", "banner hidden");
  const searchBox = el("input") as HTMLInputElement;
  searchBox.placeholder = "Search movies…";
  const results = el("ul", "results");
  const recList = el("ol", "recommendations");
  const memTable = el("tbody");

  const searchPane = el("section", "pane");
  searchPane.append(el("h2", undefined, "Rate movies"), searchBox, results);

  const recPane = el("section", "pane");
  recPane.append(el("h2", undefined, "Recommended for you"), recList);

  const memPane = el("section", "pane");
  const table = el("table", "memory");
  const head = el("thead");
  const headRow = el("tr");
  for (const h of ["Movie", "Your rating", "When", ""]) headRow.append(el("th", undefined, h));
  head.append(headRow);
  table.append(head, memTable);
  memPane.append(el("h2", undefined, "Model memory"), table);

  root.append(banner, searchPane, recPane, memPane);

  function showError(message: string | null): void {
    banner.textContent = message ?? "";
    banner.classList.toggle("hidden", message === null);
  }

  function ratingPicker(onPick: (rating: number) => void): HTMLElement {
    const select = el("select") as HTMLSelectElement;
    select.append(new Option("rate…", ""));
    for (const r of RATINGS) select.append(new Option(`${r} ★`, String(r)));
    select.addEventListener("change", () => {
      if (select.value) onPick(Number(select.value));
    });
    return select;
  }

  function renderResults(movies: MovieSummary[]): void {
    results.innerHTML = "";
    for (const movie of movies) {
      const item = el("li");
      const predicted = session.view?.predictions.get(movie.movie_id);
      item.append(
        el("span", "title", movie.title),
        el("span", "genres", movie.genres.join(", ")),
        el("span", "predicted", predicted !== undefined ? `predicts ${predicted}` : ""),
        ratingPicker((rating) => void session.rate(movie.movie_id, rating).catch(() => undefined)),
      );
      results.append(item);
    }
  }

  let searchTimer: ReturnType<typeof setTimeout> | undefined;
  searchBox.addEventListener("input", () => {
    clearTimeout(searchTimer);
    searchTimer = setTimeout(async () => {
      try {
        renderResults(await api.searchMovies(searchBox.value, 12));
      } catch (err) {
        showError(err instanceof Error ? err.message : String(err));
      }
    }, 200);
  });

  session.onChange(() => {
    const view = session.view;
    showError(session.error);
    root.classList.toggle("busy", session.busy);
    root.querySelectorAll("select,button").forEach((node) => {
      (node as HTMLSelectElement | HTMLButtonElement).disabled = session.busy;
    });
    if (!view) return;

    recList.innerHTML = "";
    for (const rec of view.recommendations) {
      const item = el("li");
      item.append(el("span", "title", rec.title), el("span", "score", `${rec.predicted_rating} ★`));
      recList.append(item);
    }

    memTable.innerHTML = "";
    for (const entry of view.memory) {
      const row = el("tr");
      const forget = el("button", "forget", "forget") as HTMLButtonElement;
      forget.addEventListener("click", () => void session.forget(entry.pair_id).catch(() => undefined));
      const when = new Date(entry.timestamp * 1000).toLocaleString();
      row.append(
        el("td", undefined, entry.title || `movie ${entry.movie_id ?? "?"}`),
        el("td", undefined, `${entry.rating} ★`),
        el("td", undefined, when),
      );
      const cell = el("td");
      cell.append(forget);
      row.append(cell);
      memTable.append(row);
    }
  });
}
