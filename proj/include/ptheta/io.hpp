#pragma once

// Output plumbing for the command-line tool: JSON documents (no NaN or
// infinity literals), RFC 4180 CSV and aligned plain-text tables.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ptheta/certified.hpp"
#include "ptheta/claims.hpp"
#include "ptheta/roots.hpp"
#include "ptheta/separation.hpp"
#include "ptheta/spectrum.hpp"

namespace ptheta::io {

using json = nlohmann::ordered_json;

inline const char* nonfinite_name(double v) {
  if (std::isnan(v)) return "NaN";
  return v > 0 ? "Infinity" : "-Infinity";
}

// Shortest decimal that reads back to the same binary64 value (at most 17
// significant digits), the same representation the JSON writer uses.
inline std::string format_number(double v) {
  if (!std::isfinite(v)) return nonfinite_name(v);
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline json number(double v) {
  if (!std::isfinite(v)) return nonfinite_name(v);
  return v;
}

inline json to_json(const CertifiedValue& v) {
  return json{{"re", number(v.real())}, {"im", number(v.imag())}, {"err", number(v.err)}};
}

inline json to_json(const ZeroRecord& z) {
  json j;
  j["q"] = number(z.q);
  j["kind"] = to_string(z.kind);
  j["index"] = z.index ? json(*z.index) : json(nullptr);
  j["re"] = number(z.x.real());
  j["im"] = number(z.x.imag());
  j["multiplicity"] = z.multiplicity;
  j["residual"] = number(z.residual);
  j["err"] = number(z.err);
  return j;
}

inline json to_json(const SpectralPoint& p) {
  return json{{"case", to_string(p.which)},
              {"k", p.k},
              {"q_star", number(p.q_star)},
              {"y", number(p.y)},
              {"character", to_string(p.character)},
              {"residual_theta", number(p.residual_theta)},
              {"residual_theta_x", number(p.residual_theta_x)},
              {"theta_xx", number(p.theta_xx)},
              {"newton_iterations", p.newton_iterations}};
}

inline json to_json(const SeparationResult& r) {
  json left = json::array(), right = json::array();
  for (const auto& z : r.left) left.push_back(to_json(z));
  for (const auto& z : r.right) right.push_back(to_json(z));
  return json{{"q", number(r.q)},
              {"kind", to_string(r.kind)},
              {"a", number(r.a)},
              {"line", number(r.line())},
              {"epsilon", number(r.epsilon)},
              {"margin", number(r.margin)},
              {"degenerate", r.degenerate},
              {"coverage_incomplete", r.coverage_incomplete},
              {"left", std::move(left)},
              {"right", std::move(right)}};
}

inline json to_json(const ClaimReport& r) {
  return json{{"id", r.id},
              {"status", to_string(r.status)},
              {"worst_q", number(r.worst_q)},
              {"worst_x", number(r.worst_x)},
              {"worst_margin", number(r.worst_margin)},
              {"nodes", r.nodes},
              {"notes", r.notes}};
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) {
    row.resize(header.size());
    rows.push_back(std::move(row));
  }

  std::string csv() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += csv_field(cells[i]);
      }
      out += "\r\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }

  std::string text() const {
    std::vector<std::size_t> width(header.size());
    for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      std::string s;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) s += "  ";
        s += cells[i];
        if (i + 1 < cells.size()) s.append(width[i] - cells[i].size(), ' ');
      }
      out += s + '\n';
    };
    line(header);
    std::size_t total = 0;
    for (std::size_t w : width) total += w;
    out += std::string(total + 2 * (width.empty() ? 0 : width.size() - 1), '-') + '\n';
    for (const auto& r : rows) line(r);
    return out;
  }
};

inline std::string optional_index(const std::optional<int>& i) { return i ? std::to_string(*i) : ""; }

}  // namespace ptheta::io
