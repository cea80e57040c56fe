"""Fee-rate-pair figure: per-step fee income next to its no-arbitrage bound."""

import sys

from ._cli import make_main
from .render import fee_rate_pair_figure, save_figure
from .schema import load_steps


def _run(args):
    save_figure(fee_rate_pair_figure(load_steps(args.steps_csv)), args.out, args.png)


main = make_main(
    "Render the fee-income / fee-bound pair from a steps.csv",
    [("steps_csv", "per-step CSV produced by the simulator"),
     ("out", "output image path")],
    _run,
)

if __name__ == "__main__":
    sys.exit(main())
