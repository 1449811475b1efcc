#pragma once

#include <charconv>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "urbanet/error.hpp"
#include "urbanet/geo.hpp"
#include "urbanet/graph.hpp"
#include "urbanet/ingest/profiles.hpp"

namespace urbanet::ingest {

namespace detail {

/// Minimal pull tokenizer for the XML subset OSM extracts use: elements,
/// attributes, comments, processing instructions, DOCTYPE and CDATA. Text
/// content is skipped. Errors carry the byte offset where scanning stopped.
class XmlScanner {
 public:
  struct Attribute {
    std::string_view name;
    std::string value;
  };

  enum class Event { Open, Close, End };

  struct Token {
    Event event = Event::End;
    std::string_view name;
    std::vector<Attribute> attributes;
    bool self_closing = false;
    std::size_t offset = 0;
  };

  explicit XmlScanner(std::string_view doc) : doc_(doc) {
    if (doc_.starts_with("\xEF\xBB\xBF")) pos_ = 3;
  }

  Token next() {
    for (;;) {
      while (pos_ < doc_.size() && doc_[pos_] != '<') ++pos_;
      if (pos_ >= doc_.size()) return {Event::End, {}, {}, false, pos_};
      const std::size_t start = pos_;
      if (match("<?")) {
        skip_past("?>", start);
      } else if (match("<!--")) {
        skip_past("-->", start);
      } else if (match("<![CDATA[")) {
        skip_past("]]>", start);
      } else if (match("<!")) {
        skip_past(">", start);
      } else if (match("</")) {
        pos_ += 2;
        Token t{Event::Close, read_name(), {}, false, start};
        skip_space();
        expect('>');
        return t;
      } else {
        ++pos_;
        Token t{Event::Open, read_name(), {}, false, start};
        for (;;) {
          skip_space();
          if (pos_ >= doc_.size()) fail("unterminated start tag");
          if (doc_[pos_] == '/') {
            ++pos_;
            expect('>');
            t.self_closing = true;
            return t;
          }
          if (doc_[pos_] == '>') {
            ++pos_;
            return t;
          }
          Attribute a;
          a.name = read_name();
          skip_space();
          expect('=');
          skip_space();
          a.value = read_quoted();
          t.attributes.push_back(std::move(a));
        }
      }
    }
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError("malformed XML: " + what, pos_); }
  [[noreturn]] void fail_at(const std::string& what, std::size_t at) const {
    throw ParseError("malformed XML: " + what, at);
  }

 private:
  bool match(std::string_view s) const { return doc_.substr(pos_).starts_with(s); }

  void skip_past(std::string_view terminator, std::size_t start) {
    const std::size_t found = doc_.find(terminator, pos_ + 1);
    if (found == std::string_view::npos) fail_at("unterminated markup", start);
    pos_ = found + terminator.size();
  }

  void skip_space() {
    while (pos_ < doc_.size() && is_space(doc_[pos_])) ++pos_;
  }

  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

  static bool is_name_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-' ||
           c == '.' || c == ':' || static_cast<unsigned char>(c) >= 0x80;
  }

  void expect(char c) {
    if (pos_ >= doc_.size() || doc_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string_view read_name() {
    const std::size_t start = pos_;
    while (pos_ < doc_.size() && is_name_char(doc_[pos_])) ++pos_;
    if (pos_ == start) fail("expected a name");
    return doc_.substr(start, pos_ - start);
  }

  std::string read_quoted() {
    if (pos_ >= doc_.size() || (doc_[pos_] != '"' && doc_[pos_] != '\'')) fail("expected quoted value");
    const char quote = doc_[pos_++];
    std::string out;
    while (pos_ < doc_.size() && doc_[pos_] != quote) {
      const char c = doc_[pos_];
      if (c == '<') fail("'<' inside attribute value");
      if (c == '&') {
        decode_entity(out);
        continue;
      }
      out.push_back(c);
      ++pos_;
    }
    if (pos_ >= doc_.size()) fail("unterminated attribute value");
    ++pos_;
    return out;
  }

  void decode_entity(std::string& out) {
    const std::size_t start = pos_;
    const std::size_t semi = doc_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 12) fail("bad entity reference");
    const std::string_view ent = doc_.substr(pos_ + 1, semi - pos_ - 1);
    pos_ = semi + 1;
    if (ent == "amp") out.push_back('&');
    else if (ent == "lt") out.push_back('<');
    else if (ent == "gt") out.push_back('>');
    else if (ent == "quot") out.push_back('"');
    else if (ent == "apos") out.push_back('\'');
    else if (ent.size() > 1 && ent[0] == '#') {
      std::uint32_t cp = 0;
      const bool hex = ent[1] == 'x' || ent[1] == 'X';
      const std::string_view digits = ent.substr(hex ? 2 : 1);
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
      if (ec != std::errc{} || p != digits.data() + digits.size() || digits.empty() || cp > 0x10FFFF)
        fail_at("bad character reference", start);
      append_utf8(out, cp);
    } else {
      fail_at("unknown entity '&" + std::string(ent) + ";'", start);
    }
  }

  static void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }

  std::string_view doc_;
  std::size_t pos_ = 0;
};

template <typename T>
bool parse_number(std::string_view s, T& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

inline const std::string* find_attr(const std::vector<XmlScanner::Attribute>& attrs, std::string_view name) {
  for (const auto& a : attrs)
    if (a.name == name) return &a.value;
  return nullptr;
}

struct RawNode {
  GeoPoint point;
  std::map<std::string, std::string> tags;
};

struct RawWay {
  std::int64_t id = 0;
  std::vector<std::int64_t> refs;
  std::map<std::string, std::string> tags;
};

struct RawOsm {
  std::unordered_map<std::int64_t, RawNode> nodes;
  std::vector<RawWay> ways;
};

inline RawOsm scan_osm(std::string_view doc) {
  XmlScanner scanner(doc);
  RawOsm raw;
  std::vector<std::string_view> stack;
  bool seen_root = false;
  // Element that owns nested <tag>/<nd>: 'n' node, 'w' way, 0 otherwise.
  char owner = 0;
  std::int64_t owner_id = 0;

  auto require_id = [&](const XmlScanner::Token& t, const char* what) {
    const std::string* v = find_attr(t.attributes, "id");
    std::int64_t id = 0;
    if (!v || !parse_number(*v, id)) throw ParseError(std::string(what) + " without a valid id", t.offset);
    return id;
  };

  for (;;) {
    XmlScanner::Token t = scanner.next();
    if (t.event == XmlScanner::Event::End) break;
    if (t.event == XmlScanner::Event::Close) {
      if (stack.empty() || stack.back() != t.name)
        scanner.fail_at("unexpected closing tag </" + std::string(t.name) + ">", t.offset);
      stack.pop_back();
      if (stack.size() <= 1) owner = 0;
      continue;
    }
    if (stack.empty()) {
      if (seen_root) scanner.fail_at("content after the root element", t.offset);
      seen_root = true;
    }
    const std::size_t depth = stack.size();
    if (depth == 1 && t.name == "node") {
      const std::int64_t id = require_id(t, "node");
      const std::string* lat = find_attr(t.attributes, "lat");
      const std::string* lon = find_attr(t.attributes, "lon");
      double la = 0, lo = 0;
      if (!lat || !lon || !parse_number(*lat, la) || !parse_number(*lon, lo))
        throw ParseError("node " + std::to_string(id) + " lacks numeric lat/lon", t.offset);
      if (!GeoPoint::valid(la, lo)) throw ParseError("node " + std::to_string(id) + " has out-of-range coordinates", t.offset);
      if (!raw.nodes.emplace(id, RawNode{GeoPoint(la, lo), {}}).second)
        throw ParseError("duplicate node id " + std::to_string(id), t.offset);
      owner = 'n';
      owner_id = id;
    } else if (depth == 1 && t.name == "way") {
      raw.ways.push_back({require_id(t, "way"), {}, {}});
      owner = 'w';
    } else if (depth == 1) {
      owner = 0;  // relation, bounds and anything else are ignored
    } else if (depth == 2 && owner != 0 && t.name == "tag") {
      const std::string* k = find_attr(t.attributes, "k");
      const std::string* v = find_attr(t.attributes, "v");
      if (!k || !v) throw ParseError("tag without k/v", t.offset);
      if (owner == 'n') raw.nodes.at(owner_id).tags[*k] = *v;
      else raw.ways.back().tags[*k] = *v;
    } else if (depth == 2 && owner == 'w' && t.name == "nd") {
      const std::string* ref = find_attr(t.attributes, "ref");
      std::int64_t id = 0;
      if (!ref || !parse_number(*ref, id)) throw ParseError("nd without a valid ref", t.offset);
      raw.ways.back().refs.push_back(id);
    }
    if (!t.self_closing) stack.push_back(t.name);
    else if (depth == 1) owner = 0;
  }
  if (!stack.empty()) scanner.fail_at("unclosed element <" + std::string(stack.back()) + ">", doc.size());
  if (!seen_root) scanner.fail_at("no root element", doc.size());
  return raw;
}

}  // namespace detail

/// Parses an OSM XML extract into one street layer of a MultilayerGraph.
///
/// Ways whose highway class the profile allows become chains of edges between
/// consecutive node refs. Under a oneway-respecting profile `oneway=yes|true|1`
/// emits only the forward edge and `oneway=-1|reverse` only the backward one;
/// everything else is emitted in both directions. Nodes not used by any
/// retained way are dropped. Relations are ignored.
inline MultilayerGraph parse_osm_xml(std::string_view document, const HighwayProfile& profile) {
  profile.validate();
  const detail::RawOsm raw = detail::scan_osm(document);
  const LayerId layer = layer_of(profile.id);

  std::vector<const detail::RawWay*> kept;
  std::vector<std::int64_t> used;
  for (const detail::RawWay& w : raw.ways) {
    auto hw = w.tags.find("highway");
    if (hw == w.tags.end() || !profile.allows(hw->second)) continue;
    for (std::int64_t ref : w.refs) {
      if (!raw.nodes.contains(ref))
        throw ParseError("way " + std::to_string(w.id) + " references undeclared node " + std::to_string(ref));
      used.push_back(ref);
    }
    kept.push_back(&w);
  }
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());

  MultilayerGraph g;
  for (std::int64_t id : used) {
    const detail::RawNode& rn = raw.nodes.at(id);
    g.add_node({id, rn.point, layer, NodeKind::Intersection, rn.tags});
  }

  for (const detail::RawWay* w : kept) {
    const std::string& highway = w->tags.at("highway");
    bool forward = true, backward = true;
    if (profile.respects_oneway) {
      if (auto ow = w->tags.find("oneway"); ow != w->tags.end()) {
        if (ow->second == "yes" || ow->second == "true" || ow->second == "1") backward = false;
        else if (ow->second == "-1" || ow->second == "reverse") forward = false;
      }
    }
    for (std::size_t i = 0; i + 1 < w->refs.size(); ++i) {
      const std::int64_t a = w->refs[i];
      const std::int64_t b = w->refs[i + 1];
      NetEdge e;
      e.layer = layer;
      e.kind = EdgeKind::Street;
      e.highway = highway;
      e.length_m = haversine_m(raw.nodes.at(a).point, raw.nodes.at(b).point);
      e.attributes["osm_way_id"] = static_cast<double>(w->id);
      if (forward) {
        e.from = a;
        e.to = b;
        g.add_edge(e);
      }
      if (backward) {
        e.from = b;
        e.to = a;
        g.add_edge(e);
      }
    }
  }
  return g;
}

}  // namespace urbanet::ingest
