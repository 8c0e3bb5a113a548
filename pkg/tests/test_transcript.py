from wrvss.group import get_group
from wrvss.transcript import Transcript

G = get_group()


def _run(items):
    t = Transcript(b"test")
    for label, data in items:
        t.append_message(label, data)
    return [t.challenge_scalar(b"c%d" % i, G.order) for i in range(3)]


def test_deterministic():
    items = [(b"a", b"1"), (b"b", b"22")]
    assert _run(items) == _run(items)


def test_reordering_changes_every_later_challenge():
    a = _run([(b"a", b"1"), (b"b", b"22")])
    b = _run([(b"b", b"22"), (b"a", b"1")])
    assert all(x != y for x, y in zip(a, b))


def test_framing_is_injective():
    assert _run([(b"ab", b"c")]) != _run([(b"a", b"bc")])
    assert _run([(b"a", b"")]) != _run([(b"a", b""), (b"", b"")])


def test_domain_separation():
    assert Transcript(b"x").challenge_bytes(b"c", 16) != Transcript(b"y").challenge_bytes(b"c", 16)


def test_challenges_ratchet_and_fork():
    t = Transcript(b"x")
    c1 = t.challenge_bytes(b"c", 32)
    f = t.fork()
    c2 = t.challenge_bytes(b"c", 32)
    assert c1 != c2 and f.challenge_bytes(b"c", 32) == c2


def test_challenge_scalar_range():
    t = Transcript(b"x")
    for _ in range(50):
        assert 0 < t.challenge_scalar(b"s", 7) < 7
