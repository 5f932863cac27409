""" Builders shared by the test modules """
import json



# Short words on purpose: pseudo translations into zh/ja pack two letters per
# character and must stay within the length ratio check.
CAPTIONS = [
    "A brown dog runs along the sandy beach.",
    "Two people eat lunch at a long table.",
    "A red car is parked near an old shop.",
    "The cat sleeps on a soft blue sofa.",
    "A man in a hat rides a bike down the road.",
    "Kids play ball in a park on a sunny day.",
    "A bowl of fresh fruit sits on the desk.",
    "The train stops at a small town.",
    "A girl holds a kite by the lake.",
    "Snow falls on the roofs of the city.",
]


def caption(i):
    return f"{CAPTIONS[i % len(CAPTIONS)]} Photo {i}."


def llava_record(i, text=None, question="Describe the image briefly.", extra_turns=()):
    conv = [{"from": "human", "value": f"<image>\n{question}"},
            {"from": "gpt", "value": caption(i) if text is None else text}]
    for q, a in extra_turns:
        conv += [{"from": "human", "value": q}, {"from": "gpt", "value": a}]
    return {"id": f"{i:09d}", "image": f"{i // 1000:05d}/{i:09d}.jpg", "conversations": conv}


def write_source(fname, records):
    fname.parent.mkdir(parents=True, exist_ok=True)
    fname.write_text(json.dumps(records, ensure_ascii=False), encoding="utf-8")
    return fname
