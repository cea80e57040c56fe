"""Heatmaps of the fee shortfall over (gamma, sigma), one panel per lambda."""

import sys

from ._cli import make_main
from .render import heatmap_figure, save_figure
from .schema import load_sweep


def _run(args):
    sweep = load_sweep(args.sweep_csv)
    save_figure(heatmap_figure(sweep, "mean_diff"), args.out_mean, args.png)
    save_figure(heatmap_figure(sweep, "std_diff"), args.out_std, args.png)


main = make_main(
    "Render mean and std heatmaps of the fee shortfall from a sweep.csv",
    [("sweep_csv", "aggregate CSV produced by the sweep command"),
     ("out_mean", "output image path for the mean heatmap"),
     ("out_std", "output image path for the std heatmap")],
    _run,
)

if __name__ == "__main__":
    sys.exit(main())
