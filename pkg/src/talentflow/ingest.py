"""Loading, validation and indexing of career-history profile files.

Input is JSON Lines, one profile object per line:

    {"person_id": "...",
     "education": [{"institution": "...", "degree": "...", "grad_date": "YYYY-MM"}],
     "spells": [{"title": "...", "organization": "...", "industry": "...",
                 "start": "YYYY-MM", "end": "YYYY-MM" | null}],
     "skills": ["...", ...]}

Malformed lines are rejected and reported with their line number; they
never abort a load. Each organization is bound to the industry it was
first seen with; later conflicts are logged and rewritten.
"""

from __future__ import annotations

import csv
import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .dates import Month

logger = logging.getLogger(__name__)

MAX_SKILLS = 50


@dataclass(frozen=True)
class EducationRecord:
    institution: str
    degree: str
    grad_date: Month | None


@dataclass(frozen=True)
class JobSpell:
    """One job held by one person. `end_date` of None means ongoing."""

    raw_title: str
    organization: str
    industry: str
    start_date: Month
    end_date: Month | None

    def resolved_end(self, reference_date: Month) -> Month:
        """End date with ongoing spells closed at the reference date."""
        return self.end_date if self.end_date is not None else reference_date


@dataclass(frozen=True)
class PersonProfile:
    person_id: str
    education: tuple[EducationRecord, ...]
    spells: tuple[JobSpell, ...]
    skills: tuple[str, ...]

    def grad_date(self) -> Month | None:
        """Most recent graduation month, or None if no dated education."""
        dates = [e.grad_date for e in self.education if e.grad_date is not None]
        return max(dates) if dates else None


@dataclass(frozen=True)
class Rejection:
    line_no: int
    reason: str


@dataclass
class LoadReport:
    loaded: int = 0
    rejections: list[Rejection] = field(default_factory=list)
    skill_truncations: int = 0
    industry_conflicts: list[tuple[str, str, str]] = field(default_factory=list)

    def reject(self, line_no: int, reason: str) -> None:
        self.rejections.append(Rejection(line_no, reason))


@dataclass(frozen=True)
class ProfileSet:
    """Immutable collection of profiles plus the shared reference date.

    `org_industry` maps every organization to its unique industry and is
    consistent with every spell (conflicting records were rewritten on load).
    """

    profiles: tuple[PersonProfile, ...]
    reference_date: Month
    org_industry: Mapping[str, str]

    def __len__(self) -> int:
        return len(self.profiles)

    def __iter__(self):
        return iter(self.profiles)

    def by_id(self) -> dict[str, PersonProfile]:
        return {p.person_id: p for p in self.profiles}

    def all_spells(self) -> Iterable[JobSpell]:
        for p in self.profiles:
            yield from p.spells


def _clean_skills(raw, report: LoadReport, person_id: str) -> tuple[str, ...]:
    seen: set[str] = set()
    out: list[str] = []
    for s in raw:
        name = str(s).strip()
        if not name or name in seen:
            continue
        seen.add(name)
        out.append(name)
    if len(out) > MAX_SKILLS:
        logger.warning("profile %s lists %d skills, truncating to %d",
                       person_id, len(out), MAX_SKILLS)
        report.skill_truncations += 1
        out = out[:MAX_SKILLS]
    return tuple(out)


def _parse_education(raw) -> tuple[EducationRecord, ...]:
    records = []
    for entry in raw:
        if not isinstance(entry, dict):
            raise ValueError("education entry is not an object")
        grad = entry.get("grad_date")
        grad_date = Month.parse(grad) if grad is not None else None
        records.append(EducationRecord(
            institution=str(entry.get("institution", "")).strip(),
            degree=str(entry.get("degree", "")).strip(),
            grad_date=grad_date,
        ))
    return tuple(records)


def _parse_spell(entry) -> JobSpell:
    if not isinstance(entry, dict):
        raise ValueError("spell entry is not an object")
    title = str(entry.get("title", "")).strip()
    organization = str(entry.get("organization", "")).strip()
    industry = str(entry.get("industry", "")).strip()
    if not title:
        raise ValueError("spell missing title")
    if not organization:
        raise ValueError("spell missing organization")
    if not industry:
        raise ValueError("spell missing industry")
    start_raw = entry.get("start")
    if start_raw is None:
        raise ValueError("spell missing start date")
    start = Month.parse(start_raw)
    end_raw = entry.get("end")
    end = Month.parse(end_raw) if end_raw is not None else None
    if end is not None and end < start:
        raise ValueError(f"spell end {end} precedes start {start}")
    return JobSpell(title, organization, industry, start, end)


def _list_field(obj, name) -> list:
    value = obj.get(name)
    if value is None:
        return []
    if not isinstance(value, list):
        raise ValueError(f"{name} must be an array")
    return value


def _parse_profile(obj) -> PersonProfile:
    if not isinstance(obj, dict):
        raise ValueError("line is not a JSON object")
    person_id = str(obj.get("person_id", "")).strip()
    if not person_id:
        raise ValueError("missing or empty person_id")
    education = _parse_education(_list_field(obj, "education"))
    spells = tuple(_parse_spell(e) for e in _list_field(obj, "spells"))
    return PersonProfile(person_id, education, spells, tuple(_list_field(obj, "skills")))


def load_profiles(path, reference_date: Month) -> tuple[ProfileSet, LoadReport]:
    """Load a JSON Lines profile file.

    Returns the profile set plus a report of rejected lines, skill
    truncations and organization/industry conflicts. An unreadable file
    raises OSError; a malformed line only rejects that line.
    """
    report = LoadReport()
    profiles: list[PersonProfile] = []
    seen_ids: set[str] = set()
    org_industry: dict[str, str] = {}

    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                profile = _parse_profile(obj)
            except (ValueError, TypeError) as exc:
                report.reject(line_no, str(exc))
                continue
            if profile.person_id in seen_ids:
                report.reject(line_no, f"duplicate person_id {profile.person_id!r}")
                continue
            seen_ids.add(profile.person_id)

            skills = _clean_skills(profile.skills, report, profile.person_id)

            # First-seen industry wins; conflicting spells are rewritten so the
            # org -> industry map stays consistent with every stored spell.
            fixed_spells = []
            for spell in profile.spells:
                known = org_industry.get(spell.organization)
                if known is None:
                    org_industry[spell.organization] = spell.industry
                    fixed_spells.append(spell)
                elif known != spell.industry:
                    logger.warning(
                        "organization %r industry conflict: keeping %r, ignoring %r",
                        spell.organization, known, spell.industry)
                    report.industry_conflicts.append(
                        (spell.organization, known, spell.industry))
                    fixed_spells.append(JobSpell(
                        spell.raw_title, spell.organization, known,
                        spell.start_date, spell.end_date))
                else:
                    fixed_spells.append(spell)

            profiles.append(PersonProfile(
                profile.person_id, profile.education, tuple(fixed_spells), skills))
            report.loaded += 1

    return ProfileSet(tuple(profiles), reference_date, org_industry), report


def profile_to_dict(p: PersonProfile) -> dict:
    return {
        "person_id": p.person_id,
        "education": [
            {"institution": e.institution, "degree": e.degree,
             "grad_date": str(e.grad_date) if e.grad_date is not None else None}
            for e in p.education
        ],
        "spells": [
            {"title": s.raw_title, "organization": s.organization,
             "industry": s.industry, "start": str(s.start_date),
             "end": str(s.end_date) if s.end_date is not None else None}
            for s in p.spells
        ],
        "skills": list(p.skills),
    }


def serialize_profiles(profile_set: ProfileSet, path) -> None:
    """Write profiles back as JSON Lines; loading the output round-trips."""
    with open(path, "w", encoding="utf-8") as fh:
        for p in profile_set:
            fh.write(json.dumps(profile_to_dict(p), ensure_ascii=False) + "\n")


def write_rejections(report: LoadReport, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["line_no", "reason"])
        for r in report.rejections:
            writer.writerow([r.line_no, r.reason])


def is_core_user(p: PersonProfile) -> bool:
    """True iff the profile has education, job spells and skills."""
    return bool(p.education) and bool(p.spells) and bool(p.skills)


def support_filter(counts: Mapping[str, int], min_sup: int) -> set[str]:
    """Keys whose count meets the minimum support (boundary inclusive)."""
    if min_sup < 1:
        raise ValueError(f"min_sup must be >= 1, got {min_sup}")
    return {key for key, n in counts.items() if n >= min_sup}


def title_counts(spells: Iterable[JobSpell]) -> Counter:
    """Occurrences of each raw title, counted over spells (not persons)."""
    return Counter(s.raw_title for s in spells)


def title_support_filter(spells: Iterable[JobSpell], min_sup: int) -> set[str]:
    """Raw titles occurring at least `min_sup` times across the given spells."""
    return support_filter(title_counts(spells), min_sup)
