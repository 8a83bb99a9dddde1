from importlib import resources

import pytest

from smartdoc.dsl import parse_kb
from smartdoc.model import load_kb

# The migraine sample exactly as the DSL documents it; several tests rely on
# its precise layout (the double space in "no  ->" included).
FIXTURE_TEXT = """KB "general-physician" VERSION 1
DISEASE migraine
  ENTRY "I have pain in my neck" KEYWORDS pain neck ROOT q_vomit
  NODE q_vomit ASK "Do you have vomiting too"
    ANSWER yes -> l_migraine
    ANSWER no  -> l_tension
  LEAF l_migraine SAY "You have migraine pain and I prescribe you to take Desprine and Bruefen and cream for massage."
    MEDICINE "Bruefen" EVERY 8h FOR 3d
  LEAF l_tension SAY "Rest and hydrate; return if pain persists."
END
"""

# Compact three-disease KB: the neck-pain, stomach-pain and sore-throat dialogues.
CLINIC_TEXT = """KB "mini-clinic" VERSION 1
DISEASE migraine
  ENTRY "I have pain in my neck" KEYWORDS pain neck ROOT q_vomit
  NODE q_vomit ASK "Do you have vomiting too"
    ANSWER yes -> l_migraine
    ANSWER no  -> l_tension
  LEAF l_migraine SAY "You have migraine pain and I prescribe you to take Desprine and Bruefen and cream for massage."
    MEDICINE "Bruefen" EVERY 8h FOR 3d
  LEAF l_tension SAY "Rest and hydrate; return if pain persists."
END
DISEASE stomach_infection
  ENTRY "I have pain in my stomach" KEYWORDS pain stomach ROOT q_diarrhea
  NODE q_diarrhea ASK "Do you have diarrhic"
    ANSWER yes -> l_infection
    ANSWER no  -> l_rest
  LEAF l_infection SAY "I prescribe to take Flagel and avoid heavy junk food"
    MEDICINE "Flagel" EVERY 12h FOR 5d
  LEAF l_rest SAY "Eat light meals and drink plenty of water."
END
DISEASE throat_infection
  ENTRY "I have got sore throat" KEYWORDS sore throat ROOT q_ear
  NODE q_ear ASK "Do you ear-ache"
    ANSWER yes -> l_severe
    ANSWER no  -> l_mild
  LEAF l_severe SAY "I prescribe you to take Arimic , if taken then take Augmentin."
    MEDICINE "Arimic" EVERY 8h FOR 5d
    MEDICINE "Augmentin" EVERY 12h FOR 7d
  LEAF l_mild SAY "Gargle with warm salt water three times a day."
END
"""


@pytest.fixture(scope="session")
def fixture_kb():
    return load_kb(parse_kb(FIXTURE_TEXT))


@pytest.fixture(scope="session")
def clinic_kb():
    return load_kb(parse_kb(CLINIC_TEXT))


@pytest.fixture(scope="session")
def shipped_text():
    return resources.files("smartdoc").joinpath("data/general_physician.kb").read_text("utf-8")


@pytest.fixture(scope="session")
def shipped_kb(shipped_text):
    return load_kb(parse_kb(shipped_text))
