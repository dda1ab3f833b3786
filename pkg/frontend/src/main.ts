import { FeedbackClient } from "./api.js";
import { WorkbenchStore } from "./state.js";
import { Workbench } from "./workbench.js";

const BASE_URL =
  document.querySelector<HTMLMetaElement>('meta[name="tegcer-base-url"]')
    ?.content ?? "http://127.0.0.1:8000";

document.addEventListener("DOMContentLoaded", () => {
  const root = document.getElementById("workbench")!;
  const store = new WorkbenchStore(new FeedbackClient(BASE_URL));
  new Workbench(root, store);
});
