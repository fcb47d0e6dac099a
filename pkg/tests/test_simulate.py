import warnings

from muller.arena import Arena
from muller.condition import MullerCondition
from muller.players import EVE, RANDOM
from muller.simulate import HorizonWarning, simulate
from muller.solver import synthesize
from muller.strategy import StrategyTransducer, SupportStrategy, product, uniformize
from muller.verifier import Verdict, check_almost_sure
from muller.witness import branch_strategy, sure_strategy
from muller.zielonka import branches

from conftest import recurring_condition


def test_zero_episodes_give_empty_stats(game, cond):
    stats = simulate(game, cond, synthesize(game, cond), episodes=0)
    assert stats.win_rate is None
    assert stats.to_json()["inf_colours"] == []


def test_same_seed_same_output(game, cond):
    s = synthesize(game, cond)
    one = simulate(game, cond, s, episodes=20, horizon=300, seed=4).to_json(cond.alphabet)
    two = simulate(game, cond, s, episodes=20, horizon=300, seed=4).to_json(cond.alphabet)
    assert one == two
    other = simulate(game, cond, s, episodes=20, horizon=300, seed=5).to_json(cond.alphabet)
    assert other["episodes"] == 20


def test_almost_sure_strategy_wins_every_episode(game, cond):
    s = synthesize(game, cond)
    assert check_almost_sure(game, cond, s).verdict is Verdict.ALMOST_SURE
    stats = simulate(game, cond, s, episodes=300, seed=1)
    assert stats.horizon == 10 * len(product(game, s))
    assert stats.win_rate == 1.0


def test_branch_strategies_against_sure_strategy(recurring_witness):
    cropped, w = recurring_witness
    c = recurring_condition()
    sigma = sure_strategy(cropped, w)
    eve_labels = {frozenset(n) for n in cropped.nodes if cropped.owner[n] is EVE}
    for b in branches(cropped):
        stats = simulate(w.arena, c, sigma, branch_strategy(cropped, b, w), episodes=1000, initial_states=[w.root_state])
        assert stats.win_rate == 1.0
        for e in stats.results:
            assert e.inf_colours in eve_labels
        # everything is pure, so a single episode was actually played
        assert len({id(e) for e in stats.results}) == 1


def test_counterexample_replay_loses(recurring_witness):
    _, w = recurring_witness
    c = recurring_condition()
    uniform = uniformize(SupportStrategy(("m",), "m", {(s, "m"): w.arena.succ[s] for s in w.arena.states_of(EVE)}))
    report = check_almost_sure(w.arena, c, uniform)
    assert report.verdict is Verdict.REFUTED
    starts = [name.split("|")[0] for name in report.counterexample["from"]][:1]
    stats = simulate(w.arena, c, uniform, report.counterexample, episodes=30, horizon=3000, seed=2, initial_states=starts)
    assert stats.wins < stats.episodes


def test_short_horizon_warns():
    a = Arena(
        ("r", "x", "y"),
        {"r": RANDOM, "x": RANDOM, "y": RANDOM},
        (("r", "x"), ("r", "y"), ("x", "r"), ("y", "r")),
        {"r": {"x": "1/2", "y": "1/2"}, "x": {"r": 1}, "y": {"r": 1}},
        {"x": "a", "y": "b"},
        ("a", "b"),
    )
    eve = StrategyTransducer(("m",), "m")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        simulate(a, MullerCondition.of("ab", ["ab"]), eve, episodes=10, horizon=4)
    assert any(issubclass(w.category, HorizonWarning) for w in caught)
