"""Flag groups shared by several commands."""
from core.router import CommandRouter


def scene_options(router: CommandRouter) -> CommandRouter:
    return router.argument("--scene", required=True, help="Scene JSON file")


def solver_options(router: CommandRouter) -> CommandRouter:
    return (
        router
        .argument("--damping", type=float, default=1.0, help="Newton step factor in (0, 1]")
        .argument("--max-step", type=float, default=None, help="Cap on a single move (default 0.25 x scene diagonal)")
        .argument("--tol", type=float, default=1e-10, help="Residual tolerance on the potential")
        .argument("--max-iterations", type=int, default=100)
    )


def grid_options(router: CommandRouter) -> CommandRouter:
    return (
        router
        .argument("--grid-nx", type=int, default=50)
        .argument("--grid-ny", type=int, default=50)
        .argument("--grid-region", default="-1,-1,1,1,0.5", help="x0,y0,x1,y1,z of the seed rectangle")
        .argument("--offset", type=float, default=0.0, help="Extra lift of the seeds along z")
    )
