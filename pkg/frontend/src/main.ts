import { ApiClient } from "./api.js";
import { initApp } from "./app.js";

// Same-origin by default (the service serves this page); override with
// ?api=http://host:port when developing against a separate backend.
const params = new URLSearchParams(window.location.search);
const api = new ApiClient(params.get("api") ?? "");

window.addEventListener("DOMContentLoaded", () => {
  initApp(document, api);
});
