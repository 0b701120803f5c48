import { mountApp } from "./app.js";

const SERVICE_URL =
  new URLSearchParams(window.location.search).get("service") ??
  "http://127.0.0.1:8000";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app container");

mountApp(root, SERVICE_URL)
  .then((app) => app.loadRecord(0))
  .catch((err) => {
    root.textContent = `Could not reach the service at ${SERVICE_URL}: ${err}`;
  });
