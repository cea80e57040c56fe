"""Combined panel: mean and std heatmaps side by side for every lambda."""

import sys

from ._cli import make_main
from .render import multi_lambda_panel_figure, save_figure
from .schema import load_sweep


def _run(args):
    save_figure(multi_lambda_panel_figure(load_sweep(args.sweep_csv)), args.out, args.png)


main = make_main(
    "Render the combined mean/std panel across lambda from a sweep.csv",
    [("sweep_csv", "aggregate CSV produced by the sweep command"),
     ("out", "output image path")],
    _run,
)

if __name__ == "__main__":
    sys.exit(main())
