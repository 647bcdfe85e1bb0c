/* Minimal placeholder runtime for self-contained bundles.
 *
 * Reads the embedded IR block and renders one titled placeholder cell per
 * view so a bundle is inspectable without the full runtime.  Build the
 * frontend package and pass its bundle via --runtime for real rendering.
 */
(function () {
  "use strict";

  function boot() {
    var irNode = document.getElementById("visdsl-ir");
    if (!irNode) return;
    var ir = JSON.parse(irNode.textContent);
    var grid = document.getElementById("visdsl-grid");
    if (!grid) return;
    ir.views.forEach(function (view) {
      var cell = document.getElementById("visdsl-view-" + view.viewId);
      if (!cell) return;
      var title = document.createElement("div");
      title.className = "visdsl-view-title";
      title.textContent = view.viewId + " [" + view.backend + "]";
      cell.appendChild(title);
      var body = document.createElement("div");
      body.className = "visdsl-view-body";
      body.textContent = view.layers
        .map(function (l) {
          return l.type;
        })
        .join(" + ");
      cell.appendChild(body);
    });
    window.visdslState = function () {
      return { views: ir.views.map(function (v) { return v.viewId; }), stub: true };
    };
  }

  if (document.readyState === "loading") {
    document.addEventListener("DOMContentLoaded", boot);
  } else {
    boot();
  }
})();
