"""Quadrant-targeted playlist building from the user's own history."""

from __future__ import annotations

from collections import Counter
from typing import Sequence

from .datamodel import EmotionQuadrant, SessionLog, Trial, quadrant_of
from .errors import NoData


def _history_by_song(sessions: Sequence[SessionLog]) -> dict[str, list[Trial]]:
    songs: dict[str, list[Trial]] = {}
    for s in sessions:
        for t in s.trials:
            songs.setdefault(t.song.title, []).append(t)
    for trials in songs.values():
        trials.sort(key=lambda t: t.play_ts)
    return songs


def song_quadrant(history: Sequence[Trial]) -> EmotionQuadrant:
    """Majority quadrant over a song's reports; ties go to the most recent."""
    if not history:
        raise NoData("song has no reports")
    counts = Counter(quadrant_of(t.valence, t.arousal) for t in history)
    top = max(counts.values())
    contenders = {q for q, c in counts.items() if c == top}
    if len(contenders) == 1:
        return contenders.pop()
    for t in sorted(history, key=lambda t: t.play_ts, reverse=True):
        q = quadrant_of(t.valence, t.arousal)
        if q in contenders:
            return q
    raise AssertionError("unreachable")


def recommend_playlist(desired: EmotionQuadrant, sessions: Sequence[SessionLog],
                       limit: int) -> list[dict]:
    """Songs whose majority quadrant matches, ranked by count then recency.

    Ranking key: listen count desc, most-recent listen desc, title asc.
    """
    if limit < 1:
        raise NoData("limit must be at least 1")
    songs = _history_by_song(sessions)
    matches = [
        (title, trials) for title, trials in songs.items()
        if song_quadrant(trials) == desired
    ]
    matches.sort(key=lambda item: (-len(item[1]), -item[1][-1].play_ts, item[0]))
    return [{
        "title": title,
        "artist": trials[-1].song.artist,
        "listen_count": len(trials),
        "last_listened_ts": trials[-1].play_ts,
        "quadrant": desired.value,
    } for title, trials in matches[:limit]]
