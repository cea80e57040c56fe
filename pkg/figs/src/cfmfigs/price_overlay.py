"""Price-overlay figure: reference price and pool price over time."""

import sys

from ._cli import make_main
from .render import price_overlay_figure, save_figure
from .schema import load_steps


def _run(args):
    save_figure(price_overlay_figure(load_steps(args.steps_csv)), args.out, args.png)


main = make_main(
    "Render the reference-vs-pool price overlay from a steps.csv",
    [("steps_csv", "per-step CSV produced by the simulator"),
     ("out", "output image path")],
    _run,
)

if __name__ == "__main__":
    sys.exit(main())
