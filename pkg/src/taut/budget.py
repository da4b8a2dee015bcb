import os

from .errors import BudgetError

FIELD_BUDGET = 2 ** 16
DOMAIN_BUDGET = 2 ** 24
GROUP_BUDGET = 10 ** 7


def domain_budget():
    """Point budget for functions on F_q^N; TAUT_BUDGET overrides it."""
    env = os.environ.get("TAUT_BUDGET")
    if env:
        return int(env)
    return DOMAIN_BUDGET


def check(size, limit, what):
    if size > limit:
        raise BudgetError(f"{what} has {size} points, budget is {limit}")
