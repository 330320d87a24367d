"""Tokenize requirement sentences, tag them, and extract the six entities.

The extractor leans on templated requirement phrasing: an actor before the
modal verb, an action after it, then optional object/property and an
operator/metric tail.
"""

from pairforge import extract_entities, pos_tag, tokenize

SENTENCES = [
    "The UAV shall fully charge in less than 3 hours",
    "The aviary shall fly with the speed of 20m/s^2",
    "The _VehicleCore_ shall support up to three virtual UAV's",
    "The system shall display the temperature of the cabin",
    "hello world",
]

for sentence in SENTENCES:
    print(f"\n{sentence!r}")
    tagged = pos_tag(tokenize(sentence))
    print("  tags:", " ".join(f"{tt.token.text}/{tt.tag}" for tt in tagged))
    entities = extract_entities(sentence)
    found = entities.targets()
    if not found:
        print("  entities: none")
        continue
    for name, span in found:
        print(f"  {name:>8}: {span.text!r} [{span.start}:{span.end}]")
