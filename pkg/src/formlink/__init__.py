"""formlink: parallel word-to-word pointer extraction from form-like documents.

The pipeline: generate a synthetic complex-layout corpus, serialize questions
and context into windows, train a small encoder with a per-link-type bilinear
scorer under circle loss, then decode value entities (and their keys) for all
questions of a document in one pass by walking the predicted word graph.
"""

__version__ = "0.1.0"
