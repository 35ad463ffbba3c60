from __future__ import annotations

import pytest

from talentflow.dates import Month
from talentflow.ingest import (EducationRecord, JobSpell, PersonProfile,
                               ProfileSet)
from talentflow.titles import TitleDictionaries


def m(text: str) -> Month:
    return Month.parse(text)


def spell(title: str, org: str, industry: str, start: str,
          end: str | None) -> JobSpell:
    return JobSpell(title, org, industry, m(start),
                    m(end) if end is not None else None)


def profile(person_id: str, spells=(), grad: str | None = None,
            skills=("python",)) -> PersonProfile:
    education = ()
    if grad is not None:
        education = (EducationRecord("University A", "BSc", m(grad)),)
    return PersonProfile(person_id, education, tuple(spells), tuple(skills))


def profile_set(profiles, reference: str = "2020-01") -> ProfileSet:
    org_industry = {}
    for p in profiles:
        for s in p.spells:
            org_industry.setdefault(s.organization, s.industry)
    return ProfileSet(tuple(profiles), m(reference), org_industry)


@pytest.fixture(scope="session")
def dicts() -> TitleDictionaries:
    return TitleDictionaries.bundled()
