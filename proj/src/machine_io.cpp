// Copyright (C) 2026 The relmachine authors
// SPDX-License-Identifier: Apache-2.0

#include "relmachine/machine_io.hpp"

#include <fstream>
#include <sstream>

#include "relmachine/error.hpp"

namespace relmachine {
namespace {

using nlohmann::json;

Symbol symbol_from(const json& v) {
  const auto s = v.get<std::string>();
  if (s.size() != 1) throw MalformedInput("symbols must be single characters, got \"" + s + "\"");
  return s[0];
}

Move move_from(const json& v) {
  const auto s = v.get<std::string>();
  if (s == "L") return Move::kLeft;
  if (s == "R") return Move::kRight;
  throw MalformedInput("move must be \"L\" or \"R\", got \"" + s + "\"");
}

std::string move_name(Move m) { return m == Move::kLeft ? "L" : "R"; }

Interval interval_from(const json& v) {
  if (!v.is_array() || v.size() != 2) throw MalformedInput("region must be [begin, end]");
  return {v.at(0).get<std::int64_t>(), v.at(1).get<std::int64_t>()};
}

}  // namespace

json to_json(const MachineSpec& spec) {
  json j;
  j["schema_version"] = kMachineSchemaVersion;
  j["name"] = spec.name;
  j["states"] = spec.states;
  j["start"] = spec.state_name(spec.start);
  j["accept"] = spec.state_name(spec.accept);
  j["reject"] = spec.state_name(spec.reject);
  json alphabet = json::array();
  for (char c : spec.alphabet.symbols()) alphabet.push_back(std::string(1, c));
  j["alphabet"] = alphabet;
  json rows = json::array();
  for (const auto& [key, a] : spec.transitions)
    rows.push_back({{"read", std::string(1, key.first)},
                    {"state", spec.state_name(key.second)},
                    {"write", std::string(1, a.write)},
                    {"next", spec.state_name(a.next)},
                    {"move", move_name(a.move)}});
  j["transitions"] = rows;
  json random = json::array();
  for (const auto& [key, succ] : spec.probabilistic) {
    json list = json::array();
    for (const auto& s : succ)
      list.push_back({{"write", std::string(1, s.action.write)},
                      {"next", spec.state_name(s.action.next)},
                      {"move", move_name(s.action.move)},
                      {"p", s.probability}});
    random.push_back({{"read", std::string(1, key.first)},
                      {"state", spec.state_name(key.second)},
                      {"successors", list}});
  }
  j["probabilistic"] = random;
  json queries = json::array();
  for (const auto& q : spec.queries) {
    json args = json::array();
    for (const auto& r : q.arg_regions) args.push_back({r.begin, r.end});
    queries.push_back({{"state", spec.state_name(q.state)},
                       {"oracle", q.oracle},
                       {"arg_region", args},
                       {"out_region", {q.out_region.begin, q.out_region.end}},
                       {"next", spec.state_name(q.next)},
                       {"move", move_name(q.move)}});
  }
  j["query_states"] = queries;
  return j;
}

MachineSpec machine_from_json(const json& j) {
  try {
    if (!j.is_object()) throw MalformedInput("machine document must be a JSON object");
    if (!j.contains("schema_version")) throw MalformedInput("missing schema_version");
    if (j.at("schema_version").get<int>() != kMachineSchemaVersion)
      throw MalformedInput("unsupported schema_version");

    MachineSpec spec;
    spec.name = j.value("name", std::string{});
    spec.states = j.at("states").get<std::vector<std::string>>();
    std::string gamma;
    for (const auto& s : j.at("alphabet")) gamma.push_back(symbol_from(s));
    spec.alphabet = Alphabet(gamma);
    spec.start = spec.state_id(j.at("start").get<std::string>());
    spec.accept = spec.state_id(j.at("accept").get<std::string>());
    spec.reject = spec.state_id(j.at("reject").get<std::string>());

    for (const auto& row : j.value("transitions", json::array())) {
      const TransitionKey key{symbol_from(row.at("read")),
                              spec.state_id(row.at("state").get<std::string>())};
      Action a{symbol_from(row.at("write")), spec.state_id(row.at("next").get<std::string>()),
               move_from(row.at("move"))};
      if (!spec.transitions.emplace(key, a).second)
        throw MalformedInput("duplicate transition for state " + row.at("state").get<std::string>());
    }
    for (const auto& row : j.value("probabilistic", json::array())) {
      const TransitionKey key{symbol_from(row.at("read")),
                              spec.state_id(row.at("state").get<std::string>())};
      std::vector<Successor> succ;
      for (const auto& s : row.at("successors"))
        succ.push_back({Action{symbol_from(s.at("write")),
                               spec.state_id(s.at("next").get<std::string>()),
                               move_from(s.at("move"))},
                        s.at("p").get<double>()});
      if (!spec.probabilistic.emplace(key, std::move(succ)).second)
        throw MalformedInput("duplicate probabilistic row");
    }
    for (const auto& row : j.value("query_states", json::array())) {
      QueryState q;
      q.state = spec.state_id(row.at("state").get<std::string>());
      q.oracle = row.at("oracle").get<std::string>();
      const auto& args = row.at("arg_region");
      if (args.is_array() && !args.empty() && args.at(0).is_array()) {
        for (const auto& r : args) q.arg_regions.push_back(interval_from(r));
      } else if (args.is_array() && !args.empty()) {
        q.arg_regions.push_back(interval_from(args));
      }
      q.out_region = interval_from(row.at("out_region"));
      q.next = spec.state_id(row.value("next", spec.state_name(spec.accept)));
      q.move = move_from(row.value("move", json("R")));
      spec.queries.push_back(std::move(q));
    }
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw MalformedInput(std::string("machine document: ") + e.what());
  }
}

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line/column pair.
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw MalformedInput(origin + ": JSON syntax error at line " + std::to_string(line) +
                         ", column " + std::to_string(column));
  }
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedInput("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json_text(buffer.str(), path.string());
}

MachineSpec load_machine_file(const std::filesystem::path& path) {
  return machine_from_json(load_json_file(path));
}

}  // namespace relmachine
