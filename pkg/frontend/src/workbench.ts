import { EXAMPLE_CAP, WorkbenchStore } from "./state.js";

/** Three-pane tutor workbench: editor, console (diagnostics), tutor
 *  (per-line example fixes with a More? control). */
export class Workbench {
  private editor: HTMLTextAreaElement;
  private gutter: HTMLElement;
  private compileButton: HTMLButtonElement;
  private banner: HTMLElement;
  private consolePane: HTMLElement;
  private tutorPane: HTMLElement;

  constructor(private root: HTMLElement, private store: WorkbenchStore) {
    root.innerHTML = `
      <div class="banner" hidden></div>
      <div class="panes">
        <div class="tutor-pane" aria-label="tutor"></div>
        <div class="right">
          <div class="editor-pane">
            <pre class="gutter"></pre>
            <textarea class="editor" spellcheck="false"></textarea>
          </div>
          <button class="compile">Compile</button>
          <div class="console-pane" aria-label="console"></div>
        </div>
      </div>`;
    this.banner = root.querySelector(".banner")!;
    this.editor = root.querySelector(".editor")!;
    this.gutter = root.querySelector(".gutter")!;
    this.compileButton = root.querySelector(".compile")!;
    this.consolePane = root.querySelector(".console-pane")!;
    this.tutorPane = root.querySelector(".tutor-pane")!;

    this.editor.addEventListener("input", () => {
      this.store.setSource(this.editor.value);
      this.renderGutter();
    });
    this.compileButton.addEventListener("click", () => {
      void this.store.compileAndShow();
    });
    this.store.subscribe(() => this.render());
    this.render();
  }

  setSource(source: string): void {
    this.editor.value = source;
    this.store.setSource(source);
    this.renderGutter();
  }

  compile(): Promise<void> {
    return this.store.compileAndShow();
  }

  private renderGutter(): void {
    const count = this.editor.value.split("\n").length;
    this.gutter.textContent = Array.from({ length: count }, (_, i) => i + 1).join("\n");
  }

  private render(): void {
    const { compiling, response, banner } = this.store.state;
    this.compileButton.disabled = compiling;
    this.banner.hidden = banner === null;
    this.banner.textContent = banner ?? "";
    this.renderConsole();
    this.renderTutor();
    if (response === null) {
      this.consolePane.textContent = compiling ? "compiling..." : "";
    }
  }

  private renderConsole(): void {
    const response = this.store.state.response;
    if (!response) return;
    this.consolePane.textContent = "";
    if (response.compiled_ok) {
      const ok = document.createElement("div");
      ok.className = "console-ok";
      ok.textContent = "compiled successfully";
      this.consolePane.append(ok);
      return;
    }
    for (const d of response.diagnostics) {
      const row = document.createElement("div");
      row.className = "console-error";
      row.textContent = `line ${d.line}: error: ${d.message}`;
      this.consolePane.append(row);
    }
  }

  private renderTutor(): void {
    this.tutorPane.textContent = "";
    for (const [lineNo, line] of this.store.state.lines) {
      const section = document.createElement("section");
      section.className = "tutor-section";
      section.dataset.line = String(lineNo);

      const heading = document.createElement("h3");
      heading.textContent = `Line ${lineNo}`;
      section.append(heading);

      const list = document.createElement("ul");
      list.className = "example-list";
      for (const ex of line.examples) {
        const item = document.createElement("li");
        item.className = "example";
        const bad = document.createElement("code");
        bad.className = "erroneous";
        bad.textContent = ex.erroneous;
        const good = document.createElement("code");
        good.className = "repaired";
        good.textContent = ex.repaired;
        item.append(bad, document.createTextNode(" → "), good);
        list.append(item);
      }
      section.append(list);

      const more = document.createElement("button");
      more.className = "more";
      more.textContent = line.examples.length >= EXAMPLE_CAP ? "No more" : "More?";
      more.disabled = !this.store.canRequestMore(lineNo);
      more.addEventListener("click", () => {
        void this.store.more(lineNo);
      });
      section.append(more);
      this.tutorPane.append(section);
    }
  }
}
