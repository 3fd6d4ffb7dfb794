#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "senti/types.hpp"

namespace senti::text {

/// Deterministic tweet tokenizer. Segmentation rules, in match order at
/// each position:
///   1. web links ("http://", "https://", "www." prefixes) are consumed
///      up to the next whitespace as a single token,
///   2. longest match against the emoticon lexicon (kept verbatim,
///      case-sensitive),
///   3. "@" + word characters form a single mention token,
///   4. "#" + word characters form a single hashtag token (the "#" stays
///      attached),
///   5. word runs (alphanumerics, "_", any non-ASCII byte) with internal
///      "'"/"-" between word characters and "."/"," between digits,
///   6. anything else accumulates into a punctuation-run token.
/// Word, link, mention and hashtag tokens are lowercased (ASCII only);
/// emoticons are not. Whitespace never survives into a token.
std::vector<std::string> tokenize(std::string_view raw);

/// Token-level replacement: web links become "url", user mentions become
/// "uuser". A link is a token with an ASCII-case-insensitive "http://",
/// "https://" or "www." prefix; a mention starts with "@" followed by at
/// least one word character. Everything else passes through unchanged.
/// Idempotent.
std::vector<std::string> normalize(std::vector<std::string> tokens);

/// The emoticon inventory used by tokenize, longest entries first.
std::span<const std::string_view> emoticon_lexicon();

struct LoadedDataset {
  std::vector<LabeledExample> examples;
  std::size_t skipped_empty = 0;  // tweets empty after preprocessing
};

/// Reads a labeled corpus: UTF-8 text, one example per line, three
/// tab-separated fields (id, label, raw tweet text). Lines starting with
/// "#" are ignored. Tokenize + normalize are applied to the text field.
/// Throws DataError on wrong field counts or unknown labels; examples
/// that end up with no tokens are skipped and counted.
LoadedDataset load_dataset(const std::filesystem::path& path);

}  // namespace senti::text
