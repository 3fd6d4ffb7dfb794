#include "senti/text_pipeline.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

namespace senti::text {
namespace {

// Longest-match inventory; sorted by length at startup so scanning can
// stop at the first hit.
constexpr std::array<std::string_view, 76> kEmoticonsRaw{
    ":-)",  ":)",   ":-(",  ":(",   ":-D",  ":D",  ":-P",  ":P",   ":-p",
    ":p",   ";-)",  ";)",   ":-/",  ":/",   ":-\\", ":\\", ":-|",  ":|",
    ":-O",  ":O",   ":-o",  ":o",   ":-*",  ":*",  ":'(",  ":')",  ":'-(",
    ":'-)", "=)",   "=(",   "=D",   "=P",   "=/",  "=\\",  "=]",   "=[",
    ":]",   ":[",   ":-]",  ":-[",  "<3",   "</3", "^_^",  "^-^",  "-_-",
    "o_O",  "O_o",  "o_o",  "O_O",  "T_T",  "XD",  "xD",   "D:",   "D-:",
    ":3",   ":-3",  "8)",   "8-)",  "B)",   "B-)", "(:",   "):",   "(-:",
    ")-:",  ";D",   ";-D",  ";P",   ";-P",  ":@",  ":-@",  ":$",   ":-$",
    ">:(",  ">:-(", ">:)",  ">:-)"};

std::vector<std::string_view> sorted_emoticons() {
  std::vector<std::string_view> out(kEmoticonsRaw.begin(), kEmoticonsRaw.end());
  std::stable_sort(out.begin(), out.end(),
                   [](std::string_view a, std::string_view b) {
                     return a.size() > b.size();
                   });
  return out;
}

const std::vector<std::string_view>& emoticons() {
  static const std::vector<std::string_view> lex = sorted_emoticons();
  return lex;
}

bool is_space_byte(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Non-ASCII bytes count as word material so UTF-8 sequences stay intact.
bool is_word_byte(unsigned char c) {
  return std::isalnum(c) != 0 || c == '_' || c >= 0x80;
}

bool is_digit_byte(unsigned char c) { return c >= '0' && c <= '9'; }

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string lowered(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = ascii_lower(c);
  return out;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (ascii_lower(s[i]) != ascii_lower(prefix[i])) return false;
  }
  return true;
}

bool is_link_start(std::string_view rest) {
  return starts_with_ci(rest, "http://") || starts_with_ci(rest, "https://") ||
         starts_with_ci(rest, "www.");
}

// Length of the emoticon starting at rest[0], or 0.
std::size_t emoticon_match(std::string_view rest) {
  for (std::string_view e : emoticons()) {
    if (rest.substr(0, e.size()) == e) return e.size();
  }
  return 0;
}

std::size_t word_run(std::string_view rest) {
  std::size_t i = 0;
  while (i < rest.size()) {
    const unsigned char c = rest[i];
    if (is_word_byte(c)) {
      ++i;
      continue;
    }
    // Internal joiners keep "can't", "e-mail" and "3.5" together.
    const bool has_next = i + 1 < rest.size();
    if ((c == '\'' || c == '-') && i > 0 && has_next &&
        is_word_byte(rest[i - 1]) && is_word_byte(rest[i + 1])) {
      ++i;
      continue;
    }
    if ((c == '.' || c == ',') && i > 0 && has_next &&
        is_digit_byte(rest[i - 1]) && is_digit_byte(rest[i + 1])) {
      ++i;
      continue;
    }
    break;
  }
  return i;
}

}  // namespace

std::span<const std::string_view> emoticon_lexicon() {
  return {emoticons().data(), emoticons().size()};
}

std::vector<std::string> tokenize(std::string_view raw) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < raw.size()) {
    if (is_space_byte(raw[pos])) {
      ++pos;
      continue;
    }
    const std::string_view rest = raw.substr(pos);

    if (is_link_start(rest)) {
      std::size_t end = 0;
      while (end < rest.size() && !is_space_byte(rest[end])) ++end;
      tokens.push_back(lowered(rest.substr(0, end)));
      pos += end;
      continue;
    }

    if (const std::size_t n = emoticon_match(rest); n > 0) {
      tokens.emplace_back(rest.substr(0, n));
      pos += n;
      continue;
    }

    if ((rest[0] == '@' || rest[0] == '#') && rest.size() > 1 &&
        is_word_byte(rest[1])) {
      std::size_t end = 1;
      while (end < rest.size() && is_word_byte(rest[end])) ++end;
      tokens.push_back(lowered(rest.substr(0, end)));
      pos += end;
      continue;
    }

    if (is_word_byte(rest[0])) {
      const std::size_t n = word_run(rest);
      tokens.push_back(lowered(rest.substr(0, n)));
      pos += n;
      continue;
    }

    // Punctuation run; stops where an emoticon or mention/hashtag begins.
    std::size_t end = 0;
    while (end < rest.size()) {
      const unsigned char c = rest[end];
      if (is_space_byte(c) || is_word_byte(c)) break;
      const std::string_view ahead = rest.substr(end);
      if (end > 0 && emoticon_match(ahead) > 0) break;
      if ((c == '@' || c == '#') && end + 1 < rest.size() &&
          is_word_byte(rest[end + 1])) {
        break;
      }
      ++end;
    }
    tokens.emplace_back(rest.substr(0, end));
    pos += end;
  }
  return tokens;
}

std::vector<std::string> normalize(std::vector<std::string> tokens) {
  for (std::string& token : tokens) {
    if (is_link_start(token)) {
      token = "url";
    } else if (token.size() >= 2 && token[0] == '@' &&
               is_word_byte(static_cast<unsigned char>(token[1]))) {
      token = "uuser";
    }
  }
  return tokens;
}

LoadedDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open dataset file: " + path.string());
  }

  LoadedDataset result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] == '#') continue;

    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = t1 == std::string::npos
                               ? std::string::npos
                               : line.find('\t', t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos) {
      std::ostringstream msg;
      msg << "expected 3 tab-separated fields at line " << line_no;
      throw DataError(msg.str());
    }

    const std::string id = line.substr(0, t1);
    const std::string label_text = line.substr(t1 + 1, t2 - t1 - 1);
    const std::string body = line.substr(t2 + 1);

    const auto label = parse_label(label_text);
    if (!label) {
      std::ostringstream msg;
      msg << "unknown label '" << label_text << "' at line " << line_no;
      throw DataError(msg.str());
    }

    std::vector<std::string> tokens = normalize(tokenize(body));
    if (tokens.empty()) {
      ++result.skipped_empty;
      continue;
    }
    result.examples.push_back({id, *label, std::move(tokens)});
  }
  return result;
}

}  // namespace senti::text
