#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unimm/complex.hpp"

namespace unimm {

struct Letter {
  Id generator;
  bool inverse;
  friend bool operator==(const Letter&, const Letter&) = default;
};

using Word = std::vector<Letter>;

inline Letter inverse(Letter l) { return {l.generator, !l.inverse}; }

struct Presentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;
  std::vector<std::string> warnings;

  friend bool operator==(const Presentation& a, const Presentation& b) {
    return a.generators == b.generators && a.relators == b.relators;
  }
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : Error("parse error at position " + std::to_string(pos) + ": " + what), position(pos) {}
  std::size_t position;
};

/// Free reduction followed by cyclic reduction.
inline Word cyclically_reduce(const Word& w) {
  Word out;
  for (const Letter& l : w) {
    if (!out.empty() && out.back() == inverse(l)) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  std::size_t lo = 0, hi = out.size();
  while (hi - lo >= 2 && out[lo] == inverse(out[hi - 1])) {
    ++lo;
    --hi;
  }
  return Word(out.begin() + static_cast<long>(lo), out.begin() + static_cast<long>(hi));
}

namespace detail {

class Scanner {
 public:
  explicit Scanner(const std::string& s) : s_(s) {}
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) throw ParseError(std::string("expected '") + c + "'", i_);
  }
  char peek() {
    skip();
    return i_ < s_.size() ? s_[i_] : '\0';
  }
  std::string identifier() {
    skip();
    const std::size_t start = i_;
    if (i_ >= s_.size() || !(std::isalpha(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) {
      throw ParseError("expected a generator name", i_);
    }
    while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
    return s_.substr(start, i_ - start);
  }
  /// Longest generator name that matches at the cursor.
  Id generator(const std::vector<std::string>& gens) {
    skip();
    Id best = kNone;
    std::size_t len = 0;
    for (Id g = 0; g < static_cast<Id>(gens.size()); ++g) {
      const auto& name = gens[g];
      if (name.size() > len && s_.compare(i_, name.size(), name) == 0) {
        best = g;
        len = name.size();
      }
    }
    if (best == kNone) throw ParseError("unknown generator", i_);
    i_ += len;
    return best;
  }
  long integer() {
    skip();
    const std::size_t start = i_;
    if (i_ < s_.size() && (s_[i_] == '-' || s_[i_] == '+')) ++i_;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
    const std::string t = s_.substr(start, i_ - start);
    if (t.empty() || t == "-" || t == "+") throw ParseError("expected an integer exponent", start);
    return std::stol(t);
  }
  std::size_t pos() const { return i_; }
  bool done() {
    skip();
    return i_ >= s_.size();
  }

 private:
  const std::string& s_;
  std::size_t i_ = 0;
};

inline Word parse_word(Scanner& sc, const std::vector<std::string>& gens, const std::string& stop) {
  Word w;
  while (!sc.done() && stop.find(sc.peek()) == std::string::npos) {
    Letter l{sc.generator(gens), false};
    while (sc.eat('\'')) l.inverse = !l.inverse;
    long power = 1;
    if (sc.eat('^')) power = sc.integer();
    if (power < 0) l.inverse = !l.inverse;
    for (long k = 0; k < (power < 0 ? -power : power); ++k) w.push_back(l);
  }
  return w;
}

}  // namespace detail

/// Parses `< g1, g2, ... | w1, w2, ... >`. Relators are cyclically reduced (with a warning if
/// that changes them); an empty relator is an error.
inline Presentation parse_presentation(const std::string& text) {
  detail::Scanner sc(text);
  Presentation p;
  sc.expect('<');
  if (sc.peek() != '|') {
    do {
      const std::size_t at = sc.pos();
      std::string g = sc.identifier();
      for (const auto& h : p.generators) {
        if (h == g) throw ParseError("duplicate generator '" + g + "'", at);
      }
      p.generators.push_back(g);
    } while (sc.eat(','));
  }
  sc.expect('|');
  if (sc.peek() != '>') {
    do {
      const std::size_t at = sc.pos();
      Word w = detail::parse_word(sc, p.generators, ",>");
      if (w.empty()) throw ParseError("empty relator", at);
      Word r = cyclically_reduce(w);
      if (r.empty()) throw ParseError("relator reduces to the empty word", at);
      if (r.size() != w.size()) p.warnings.push_back("relator " + std::to_string(p.relators.size() + 1) + " was cyclically reduced");
      p.relators.push_back(std::move(r));
    } while (sc.eat(','));
  }
  sc.expect('>');
  if (!sc.done()) throw ParseError("trailing input", sc.pos());
  return p;
}

/// Parses a word over the given generators (used for generator images).
inline Word parse_word(const std::string& text, const std::vector<std::string>& gens) {
  detail::Scanner sc(text);
  Word w = detail::parse_word(sc, gens, "");
  if (!sc.done()) throw ParseError("trailing input", sc.pos());
  return w;
}

inline std::string to_string(const Word& w, const std::vector<std::string>& gens) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += gens[w[i].generator];
    if (w[i].inverse) out += '\'';
  }
  return out;
}

inline std::string to_string(const Presentation& p) {
  std::string out = "<";
  for (std::size_t i = 0; i < p.generators.size(); ++i) out += (i ? ", " : "") + p.generators[i];
  out += " | ";
  for (std::size_t i = 0; i < p.relators.size(); ++i) out += (i ? ", " : "") + to_string(p.relators[i], p.generators);
  return out + ">";
}

/// One vertex, one loop per generator, one face cycle per relator. A face edge spelling an
/// inverse letter runs against the orientation of its face cycle.
inline PreComplex presentation_complex(const Presentation& p) {
  PreComplex x;
  x.skeleton.vertex_count = 1;
  for (std::size_t g = 0; g < p.generators.size(); ++g) x.skeleton.add_edge(0, 0);
  for (const Word& r : p.relators) {
    if (r.empty()) throw Error("presentation_complex: empty relator");
    const Id base = x.faces.vertex_count;
    const Id n = static_cast<Id>(r.size());
    for (Id i = 0; i < n; ++i) {
      x.faces.add_vertex();
      x.attach.vertices.push_back(0);
    }
    for (Id i = 0; i < n; ++i) {
      const Id a = base + i, b = base + (i + 1) % n;
      if (r[i].inverse) {
        x.faces.add_edge(b, a);
      } else {
        x.faces.add_edge(a, b);
      }
      x.attach.edges.push_back(r[i].generator);
    }
  }
  x.validate();
  return x;
}

inline PreComplex presentation_complex(const std::string& text) { return presentation_complex(parse_presentation(text)); }

/// Map of presentation complexes sending each source generator to a word in the target generators.
/// Source generators are subdivided into paths spelling their images; each source relator must
/// spell a power of a cyclic rotation of some target relator.
inline ComplexMorphism presentation_map(const Presentation& source, const Presentation& target,
                                        const std::vector<Word>& images) {
  if (images.size() != source.generators.size()) throw Error("presentation_map: one image per generator required");
  const PreComplex x = presentation_complex(target);
  PreComplex y;
  GraphMap sk;
  y.skeleton.vertex_count = 1;
  sk.vertices.push_back(0);
  // Each generator becomes a path; record its edges and their orientation along the path.
  std::vector<std::vector<std::pair<Id, bool>>> path(images.size());
  for (std::size_t g = 0; g < images.size(); ++g) {
    const Word& img = images[g];
    if (img.empty()) throw Error("presentation_map: generator image is empty");
    Id at = 0;
    for (std::size_t j = 0; j < img.size(); ++j) {
      Id next = 0;
      if (j + 1 < img.size()) {
        next = y.skeleton.add_vertex();
        sk.vertices.push_back(0);
      }
      const Id e = img[j].inverse ? y.skeleton.add_edge(next, at) : y.skeleton.add_edge(at, next);
      sk.edges.push_back(img[j].generator);
      path[g].emplace_back(e, !img[j].inverse);
      at = next;
    }
  }
  GraphMap fm;
  for (const Word& r : source.relators) {
    // Spell the relator as a sequence of (Y-edge, forward) and target letters.
    std::vector<std::pair<Id, bool>> steps;
    Word spelled;
    for (const Letter& l : r) {
      const auto& p = path[l.generator];
      const Word& img = images[l.generator];
      if (!l.inverse) {
        for (std::size_t j = 0; j < p.size(); ++j) {
          steps.push_back(p[j]);
          spelled.push_back(img[j]);
        }
      } else {
        for (std::size_t j = p.size(); j-- > 0;) {
          steps.emplace_back(p[j].first, !p[j].second);
          spelled.push_back(inverse(img[j]));
        }
      }
    }
    const Id n = static_cast<Id>(steps.size());
    // Find a target relator and rotation matching the spelled word.
    Id match_rel = kNone, match_off = 0, rel_base = 0;
    Id base_acc = 0;
    for (Id k = 0; k < static_cast<Id>(target.relators.size()) && match_rel == kNone; ++k) {
      const Word& t = target.relators[k];
      const Id m = static_cast<Id>(t.size());
      if (n % m == 0) {
        for (Id off = 0; off < m && match_rel == kNone; ++off) {
          bool ok = true;
          for (Id i = 0; i < n && ok; ++i) ok = spelled[i] == t[(i + off) % m];
          if (ok) {
            match_rel = k;
            match_off = off;
            rel_base = base_acc;
          }
        }
      }
      base_acc += m;
    }
    if (match_rel == kNone) throw Error("presentation_map: a relator does not spell a target relator");
    const Id m = static_cast<Id>(target.relators[match_rel].size());
    const Id base = y.faces.vertex_count;
    for (Id i = 0; i < n; ++i) {
      y.faces.add_vertex();
      fm.vertices.push_back(rel_base + (i + match_off) % m);
    }
    for (Id i = 0; i < n; ++i) {
      const Id a = base + i, b = base + (i + 1) % n;
      const auto [e, forward] = steps[i];
      if (forward) {
        y.faces.add_edge(a, b);
      } else {
        y.faces.add_edge(b, a);
      }
      y.attach.edges.push_back(e);
      fm.edges.push_back(rel_base + (i + match_off) % m);
    }
  }
  for (Id u = 0; u < y.faces.vertex_count; ++u) y.attach.vertices.push_back(kNone);
  for (Id s = 0; s < y.faces.edge_count(); ++s) {
    const Id e = y.attach.edges[s];
    y.attach.vertices[y.faces.iota[s]] = y.skeleton.iota[e];
    y.attach.vertices[y.faces.tau[s]] = y.skeleton.tau[e];
  }
  y.validate();
  ComplexMorphism f{y, x, sk, fm};
  if (!f.valid()) throw Error("presentation_map: constructed map is not a morphism");
  return f;
}

}  // namespace unimm
