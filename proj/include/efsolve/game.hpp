#pragma once

// Extensive-form game trees: representation, JSON reading/writing and
// structural validation.
//
// A node is decision, chance or terminal. Decision nodes may have several
// simultaneous movers; their children are keyed by an action profile holding
// one action per mover. Chance nodes have a single mover (nature) with a fixed,
// commonly known distribution. Every (decision node, mover) pair belongs to
// exactly one information set of that mover.

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "efsolve/rational.hpp"
#include <nlohmann/json.hpp>

namespace efsolve {

using Json = nlohmann::json;

inline constexpr int kChancePlayer = -1;
inline const char kChanceId[] = "chance";

enum class NodeKind { kDecision, kChance, kTerminal };

// Thrown for input that cannot even be assembled into a tree: malformed JSON,
// unknown fields, dangling references, cycles, duplicate identifiers.
class GameFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when a well-formed tree is used although it fails validation.
class InvalidGameError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  std::vector<int> profile;  // action index per mover, aligned with movers
  int child = -1;
};

struct Node {
  std::string id;
  NodeKind kind = NodeKind::kTerminal;
  std::vector<int> movers;                       // player indices or chance
  std::vector<std::vector<std::string>> actions;  // per mover, first-seen order
  std::vector<Edge> edges;
  std::vector<Rational> chance_probs;  // aligned with actions[0] at chance
  std::vector<Rational> payoffs;       // per player, terminal nodes only
  int parent = -1;
  int parent_edge = -1;
  int depth = 0;
};

struct InfoSet {
  std::string id;
  int player = 0;
  std::vector<int> nodes;
  std::vector<std::string> actions;  // order of the first member node
};

struct Violation {
  std::string kind;     // e.g. "perfect_recall", "action_mismatch"
  std::string message;  // names the offending nodes / information sets
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string Summary() const {
    std::ostringstream out;
    for (const Violation& v : violations) {
      out << v.kind << ": " << v.message << "\n";
    }
    return out.str();
  }
};

class GameTree {
 public:
  GameTree() = default;

  static GameTree FromJson(const Json& doc);
  static GameTree FromJsonText(const std::string& text) {
    Json doc;
    try {
      doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw GameFormatError(std::string("malformed JSON: ") + e.what());
    }
    return FromJson(doc);
  }
  Json ToJson() const;

  const std::string& name() const { return name_; }
  const std::string& caption() const { return caption_; }
  void set_name(std::string name) { name_ = std::move(name); }
  void set_caption(std::string caption) { caption_ = std::move(caption); }

  int num_players() const { return static_cast<int>(players_.size()); }
  const std::vector<std::string>& players() const { return players_; }
  const std::string& player_id(int p) const { return players_.at(p); }
  int PlayerIndex(const std::string& id) const;

  int root() const { return root_; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  const Node& node(int n) const { return nodes_.at(n); }
  const std::vector<Node>& nodes() const { return nodes_; }
  int NodeIndex(const std::string& id) const;

  int num_info_sets() const { return static_cast<int>(info_sets_.size()); }
  const InfoSet& info_set(int i) const { return info_sets_.at(i); }
  const std::vector<InfoSet>& info_sets() const { return info_sets_; }
  int InfoSetIndex(const std::string& id) const;

  // Information set of `mover_pos`-th mover at decision node `n`.
  int InfoSetAt(int n, int mover_pos) const {
    return node_info_sets_.at(n).at(mover_pos);
  }
  // Information set of player `p` at node `n`, or -1 if p does not move there.
  int InfoSetOf(int p, int n) const;

  // True when `a` is a (weak) ancestor of `b`.
  bool IsAncestor(int a, int b) const;

  const ValidationReport& validation() const { return validation_; }
  void RequireValid() const {
    if (!validation_.ok()) {
      throw InvalidGameError("game fails validation:\n" + validation_.Summary());
    }
  }

  // Programmatic construction used by generators and tests.
  class Builder;

 private:
  void Finalize();  // parent links, depths, info-set lookup, validation

  std::string name_;
  std::string caption_;
  std::vector<std::string> players_;
  std::vector<Node> nodes_;
  std::vector<InfoSet> info_sets_;
  int root_ = 0;
  std::vector<std::vector<int>> node_info_sets_;
  ValidationReport validation_;
};

inline ValidationReport ValidateGame(const GameTree& game) {
  return game.validation();
}

// Incremental construction. Nodes are addressed by id; info sets not declared
// explicitly default to singletons.
class GameTree::Builder {
 public:
  explicit Builder(std::vector<std::string> players) {
    game_.players_ = std::move(players);
  }

  Builder& Name(std::string name) {
    game_.name_ = std::move(name);
    return *this;
  }
  Builder& Caption(std::string caption) {
    game_.caption_ = std::move(caption);
    return *this;
  }

  // Decision node: movers by player id, children listed as (profile, child).
  Builder& Decision(
      const std::string& id, std::vector<std::string> movers,
      std::vector<std::pair<std::vector<std::string>, std::string>> children) {
    pending_.push_back({id, NodeKind::kDecision, std::move(movers),
                        std::move(children), {}, {}});
    return *this;
  }
  // Chance node: (action, probability, child).
  Builder& Chance(const std::string& id,
                  std::vector<std::tuple<std::string, Rational, std::string>>
                      outcomes) {
    PendingNode node{id, NodeKind::kChance, {kChanceId}, {}, {}, {}};
    for (auto& [action, prob, child] : outcomes) {
      node.children.push_back({{action}, child});
      node.probs.emplace_back(action, prob);
    }
    pending_.push_back(std::move(node));
    return *this;
  }
  Builder& Terminal(const std::string& id, std::vector<Rational> payoffs) {
    pending_.push_back(
        {id, NodeKind::kTerminal, {}, {}, {}, std::move(payoffs)});
    return *this;
  }
  Builder& InfoSet(const std::string& id, const std::string& player,
                   std::vector<std::string> node_ids) {
    declared_sets_.push_back({id, player, std::move(node_ids)});
    return *this;
  }
  Builder& Root(const std::string& id) {
    root_ = id;
    return *this;
  }

  GameTree Build();

 private:
  struct PendingNode {
    std::string id;
    NodeKind kind;
    std::vector<std::string> movers;
    std::vector<std::pair<std::vector<std::string>, std::string>> children;
    std::vector<std::pair<std::string, Rational>> probs;
    std::vector<Rational> payoffs;
  };
  struct PendingSet {
    std::string id;
    std::string player;
    std::vector<std::string> nodes;
  };
  GameTree game_;
  std::vector<PendingNode> pending_;
  std::vector<PendingSet> declared_sets_;
  std::string root_;
};

// ---------------------------------------------------------------------------
// Implementation
// ---------------------------------------------------------------------------

inline int GameTree::PlayerIndex(const std::string& id) const {
  for (int p = 0; p < num_players(); ++p) {
    if (players_[p] == id) return p;
  }
  if (id == kChanceId) return kChancePlayer;
  throw GameFormatError("unknown player '" + id + "'");
}

inline int GameTree::NodeIndex(const std::string& id) const {
  for (int n = 0; n < num_nodes(); ++n) {
    if (nodes_[n].id == id) return n;
  }
  throw GameFormatError("unknown node '" + id + "'");
}

inline int GameTree::InfoSetIndex(const std::string& id) const {
  for (int i = 0; i < num_info_sets(); ++i) {
    if (info_sets_[i].id == id) return i;
  }
  throw GameFormatError("unknown information set '" + id + "'");
}

inline int GameTree::InfoSetOf(int p, int n) const {
  const Node& nd = nodes_.at(n);
  for (std::size_t m = 0; m < nd.movers.size(); ++m) {
    if (nd.movers[m] == p) return node_info_sets_[n][m];
  }
  return -1;
}

inline bool GameTree::IsAncestor(int a, int b) const {
  while (b >= 0) {
    if (a == b) return true;
    b = nodes_[b].parent;
  }
  return false;
}

inline GameTree GameTree::Builder::Build() {
  GameTree& g = game_;
  std::map<std::string, int> index;
  for (const PendingNode& pn : pending_) {
    if (!index.emplace(pn.id, static_cast<int>(index.size())).second) {
      throw GameFormatError("duplicate node id '" + pn.id + "'");
    }
  }
  std::set<std::string> player_ids(g.players_.begin(), g.players_.end());
  if (player_ids.size() != g.players_.size()) {
    throw GameFormatError("duplicate player id");
  }
  if (g.players_.empty()) throw GameFormatError("game has no players");
  if (player_ids.count(kChanceId)) {
    throw GameFormatError("player id 'chance' is reserved for nature");
  }
  g.nodes_.clear();
  for (const PendingNode& pn : pending_) {
    Node node;
    node.id = pn.id;
    node.kind = pn.kind;
    if (pn.kind == NodeKind::kTerminal) {
      if (!pn.children.empty()) {
        throw GameFormatError("terminal node '" + pn.id + "' has actions");
      }
      node.payoffs = pn.payoffs;
      g.nodes_.push_back(std::move(node));
      continue;
    }
    if (pn.children.empty()) {
      throw GameFormatError("non-terminal node '" + pn.id + "' has no actions");
    }
    if (pn.movers.empty()) {
      throw GameFormatError("decision node '" + pn.id + "' has no movers");
    }
    std::set<std::string> seen_movers;
    for (const std::string& m : pn.movers) {
      if (!seen_movers.insert(m).second) {
        throw GameFormatError("node '" + pn.id + "' lists mover '" + m +
                              "' twice");
      }
      int p = g.PlayerIndex(m);
      if ((p == kChancePlayer) != (pn.kind == NodeKind::kChance)) {
        throw GameFormatError("node '" + pn.id +
                              "': chance may move only at chance nodes, and "
                              "alone");
      }
      node.movers.push_back(p);
    }
    if (pn.kind == NodeKind::kChance && node.movers.size() != 1) {
      throw GameFormatError("chance node '" + pn.id + "' must have one mover");
    }
    node.actions.assign(node.movers.size(), {});
    for (const auto& [profile, child] : pn.children) {
      if (profile.size() != node.movers.size()) {
        throw GameFormatError("node '" + pn.id +
                              "': action profile length differs from the "
                              "number of movers");
      }
      Edge edge;
      for (std::size_t m = 0; m < profile.size(); ++m) {
        auto& acts = node.actions[m];
        auto it = std::find(acts.begin(), acts.end(), profile[m]);
        if (it == acts.end()) {
          acts.push_back(profile[m]);
          it = acts.end() - 1;
        }
        edge.profile.push_back(static_cast<int>(it - acts.begin()));
      }
      auto c = index.find(child);
      if (c == index.end()) {
        throw GameFormatError("node '" + pn.id + "' references unknown child '" +
                              child + "'");
      }
      edge.child = c->second;
      node.edges.push_back(edge);
    }
    if (pn.kind == NodeKind::kChance) {
      node.chance_probs.assign(node.actions[0].size(), Rational(0));
      std::vector<bool> given(node.actions[0].size(), false);
      for (const auto& [action, prob] : pn.probs) {
        auto& acts = node.actions[0];
        auto it = std::find(acts.begin(), acts.end(), action);
        if (it == acts.end()) {
          throw GameFormatError("chance node '" + pn.id +
                                "' has a probability for unknown action '" +
                                action + "'");
        }
        given[it - acts.begin()] = true;
        node.chance_probs[it - acts.begin()] = prob;
      }
      for (std::size_t a = 0; a < given.size(); ++a) {
        if (!given[a]) {
          throw GameFormatError("chance node '" + pn.id +
                                "' lacks a probability for action '" +
                                node.actions[0][a] + "'");
        }
      }
    }
    g.nodes_.push_back(std::move(node));
  }
  if (root_.empty()) throw GameFormatError("no root declared");
  auto r = index.find(root_);
  if (r == index.end()) throw GameFormatError("unknown root '" + root_ + "'");
  g.root_ = r->second;

  // Information sets: declared ones first, then singletons for the rest.
  g.info_sets_.clear();
  std::map<std::pair<int, int>, int> owner;  // (node, player) -> info set
  std::set<std::string> set_ids;
  for (const PendingSet& ps : declared_sets_) {
    efsolve::InfoSet info;
    info.id = ps.id;
    info.player = g.PlayerIndex(ps.player);
    if (info.player == kChancePlayer) {
      throw GameFormatError("information set '" + ps.id +
                            "' is owned by chance");
    }
    if (ps.nodes.empty()) {
      throw GameFormatError("information set '" + ps.id + "' is empty");
    }
    if (!set_ids.insert(ps.id).second) {
      throw GameFormatError("duplicate information set id '" + ps.id + "'");
    }
    for (const std::string& nid : ps.nodes) {
      auto it = index.find(nid);
      if (it == index.end()) {
        throw GameFormatError("information set '" + ps.id +
                              "' references unknown node '" + nid + "'");
      }
      info.nodes.push_back(it->second);
    }
    g.info_sets_.push_back(std::move(info));
  }
  for (int n = 0; n < static_cast<int>(g.nodes_.size()); ++n) {
    const Node& nd = g.nodes_[n];
    if (nd.kind != NodeKind::kDecision) continue;
    for (int p : nd.movers) {
      bool covered = false;
      for (const auto& info : g.info_sets_) {
        if (info.player == p &&
            std::find(info.nodes.begin(), info.nodes.end(), n) !=
                info.nodes.end()) {
          covered = true;
        }
      }
      if (covered) continue;
      efsolve::InfoSet info;
      info.id = nd.movers.size() == 1 ? nd.id
                                      : nd.id + ":" + g.players_[p];
      while (set_ids.count(info.id)) info.id += "'";
      set_ids.insert(info.id);
      info.player = p;
      info.nodes = {n};
      g.info_sets_.push_back(std::move(info));
    }
  }
  g.Finalize();
  return std::move(game_);
}

inline void GameTree::Finalize() {
  validation_ = {};
  auto report = [this](std::string kind, std::string message) {
    validation_.violations.push_back({std::move(kind), std::move(message)});
  };

  // Tree shape: every non-root node has exactly one parent, all reachable.
  for (Node& nd : nodes_) {
    nd.parent = -1;
    nd.parent_edge = -1;
  }
  for (int n = 0; n < num_nodes(); ++n) {
    for (int e = 0; e < static_cast<int>(nodes_[n].edges.size()); ++e) {
      int c = nodes_[n].edges[e].child;
      if (c == root_) {
        throw GameFormatError("node '" + nodes_[n].id +
                              "' points back to the root");
      }
      if (nodes_[c].parent >= 0) {
        throw GameFormatError("node '" + nodes_[c].id +
                              "' has more than one parent");
      }
      nodes_[c].parent = n;
      nodes_[c].parent_edge = e;
    }
  }
  std::vector<int> stack = {root_};
  std::vector<bool> seen(num_nodes(), false);
  seen[root_] = true;
  nodes_[root_].depth = 0;
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    for (const Edge& e : nodes_[n].edges) {
      if (seen[e.child]) {
        throw GameFormatError("cycle through node '" + nodes_[e.child].id +
                              "'");
      }
      seen[e.child] = true;
      nodes_[e.child].depth = nodes_[n].depth + 1;
      stack.push_back(e.child);
    }
  }
  for (int n = 0; n < num_nodes(); ++n) {
    if (!seen[n]) {
      throw GameFormatError("node '" + nodes_[n].id +
                            "' is not reachable from the root");
    }
  }

  // Terminal payoffs.
  for (const Node& nd : nodes_) {
    if (nd.kind == NodeKind::kTerminal &&
        static_cast<int>(nd.payoffs.size()) != num_players()) {
      report("payoffs", "terminal node '" + nd.id +
                            "' does not carry one payoff per player");
    }
  }

  // Complete action profiles: children cover the product of action sets once.
  for (const Node& nd : nodes_) {
    if (nd.kind == NodeKind::kTerminal) continue;
    std::size_t expected = 1;
    for (const auto& acts : nd.actions) expected *= acts.size();
    std::set<std::vector<int>> profiles;
    for (const Edge& e : nd.edges) {
      if (!profiles.insert(e.profile).second) {
        report("action_profiles",
               "node '" + nd.id + "' lists an action profile twice");
      }
    }
    if (profiles.size() != expected) {
      report("action_profiles", "node '" + nd.id +
                                    "' does not have a child for every "
                                    "combination of the movers' actions");
    }
  }

  // Chance distributions.
  for (const Node& nd : nodes_) {
    if (nd.kind != NodeKind::kChance) continue;
    Rational total = 0;
    for (const Rational& p : nd.chance_probs) {
      if (p <= 0) {
        report("chance_distribution",
               "chance node '" + nd.id + "' has a non-positive probability");
      }
      total += p;
    }
    if (total != 1) {
      report("chance_distribution", "chance probabilities at node '" + nd.id +
                                        "' sum to " + FormatRational(total));
    }
  }

  // Information-set membership and action consistency.
  node_info_sets_.assign(num_nodes(), {});
  for (int n = 0; n < num_nodes(); ++n) {
    node_info_sets_[n].assign(nodes_[n].movers.size(), -1);
  }
  for (int i = 0; i < num_info_sets(); ++i) {
    InfoSet& info = info_sets_[i];
    info.actions.clear();
    for (int n : info.nodes) {
      const Node& nd = nodes_[n];
      auto it = std::find(nd.movers.begin(), nd.movers.end(), info.player);
      if (nd.kind != NodeKind::kDecision || it == nd.movers.end()) {
        report("info_set_membership",
               "information set '" + info.id + "' contains node '" + nd.id +
                   "' where player '" + players_[info.player] +
                   "' does not move");
        continue;
      }
      int pos = static_cast<int>(it - nd.movers.begin());
      if (node_info_sets_[n][pos] >= 0) {
        report("info_set_membership",
               "node '" + nd.id + "' belongs to two information sets of "
               "player '" + players_[info.player] + "'");
        continue;
      }
      node_info_sets_[n][pos] = i;
      const auto& acts = nd.actions[pos];
      if (info.actions.empty()) {
        info.actions = acts;
      } else if (std::set<std::string>(acts.begin(), acts.end()) !=
                     std::set<std::string>(info.actions.begin(),
                                           info.actions.end())) {
        report("action_mismatch", "nodes of information set '" + info.id +
                                      "' offer different actions (node '" +
                                      nd.id + "')");
      }
    }
  }

  // Perfect recall: all nodes of an information set share the owner's
  // experience (sequence of own information sets visited and actions taken).
  auto experience = [this](int player, int n) {
    std::vector<std::pair<int, std::string>> path;
    for (int cur = n; nodes_[cur].parent >= 0; cur = nodes_[cur].parent) {
      const Node& par = nodes_[nodes_[cur].parent];
      for (std::size_t m = 0; m < par.movers.size(); ++m) {
        if (par.movers[m] != player) continue;
        int a = par.edges[nodes_[cur].parent_edge].profile[m];
        path.emplace_back(node_info_sets_[nodes_[cur].parent][m],
                          par.actions[m][a]);
      }
    }
    std::reverse(path.begin(), path.end());
    return path;
  };
  for (const InfoSet& info : info_sets_) {
    if (info.nodes.size() < 2) continue;
    auto reference = experience(info.player, info.nodes[0]);
    for (std::size_t k = 1; k < info.nodes.size(); ++k) {
      if (experience(info.player, info.nodes[k]) != reference) {
        report("perfect_recall",
               "player '" + players_[info.player] +
                   "' cannot distinguish nodes '" + nodes_[info.nodes[0]].id +
                   "' and '" + nodes_[info.nodes[k]].id +
                   "' although the own history leading to them differs "
                   "(information set '" + info.id + "')");
      }
    }
  }
}

namespace game_json_internal {

inline void RejectUnknown(const Json& obj, const std::set<std::string>& allowed,
                          const std::string& where) {
  if (!obj.is_object()) throw GameFormatError(where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw GameFormatError("unknown field '" + it.key() + "' in " + where);
    }
  }
}

inline const Json& Require(const Json& obj, const std::string& key,
                           const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw GameFormatError("missing field '" + key + "' in " + where);
  }
  return *it;
}

inline std::string AsString(const Json& value, const std::string& where) {
  if (!value.is_string()) throw GameFormatError(where + " must be a string");
  return value.get<std::string>();
}

inline Rational AsRational(const Json& value, const std::string& where) {
  std::string text = AsString(value, where);
  try {
    return ParseRational(text);
  } catch (const RationalParseError& e) {
    throw GameFormatError(where + ": " + e.what());
  }
}

}  // namespace game_json_internal

inline GameTree GameTree::FromJson(const Json& doc) {
  using namespace game_json_internal;
  RejectUnknown(doc, {"name", "caption", "players", "nodes", "info_sets", "root"},
                "game");
  const Json& players = Require(doc, "players", "game");
  if (!players.is_array()) throw GameFormatError("'players' must be an array");
  std::vector<std::string> player_ids;
  for (const Json& p : players) player_ids.push_back(AsString(p, "player id"));
  Builder builder(player_ids);
  if (doc.contains("name")) builder.Name(AsString(doc["name"], "'name'"));
  if (doc.contains("caption")) {
    builder.Caption(AsString(doc["caption"], "'caption'"));
  }
  builder.Root(AsString(Require(doc, "root", "game"), "'root'"));

  const Json& nodes = Require(doc, "nodes", "game");
  if (!nodes.is_array()) throw GameFormatError("'nodes' must be an array");
  for (const Json& nj : nodes) {
    RejectUnknown(nj, {"id", "kind", "movers", "actions", "chance_probs",
                       "payoffs"},
                  "node");
    std::string id = AsString(Require(nj, "id", "node"), "node id");
    std::string where = "node '" + id + "'";
    std::string kind = AsString(Require(nj, "kind", where), where + " kind");
    if (kind == "terminal") {
      for (const char* f : {"movers", "actions", "chance_probs"}) {
        if (nj.contains(f)) {
          throw GameFormatError(where + " is terminal but has '" + f + "'");
        }
      }
      const Json& pay = Require(nj, "payoffs", where);
      RejectUnknown(pay, std::set<std::string>(player_ids.begin(),
                                               player_ids.end()),
                    where + " payoffs");
      std::vector<Rational> values;
      for (const std::string& p : player_ids) {
        if (!pay.contains(p)) {
          throw GameFormatError(where + " lacks a payoff for player '" + p +
                                "'");
        }
        values.push_back(AsRational(pay[p], where + " payoff"));
      }
      builder.Terminal(id, std::move(values));
      continue;
    }
    if (nj.contains("payoffs")) {
      throw GameFormatError(where + " is not terminal but has payoffs");
    }
    const Json& actions = Require(nj, "actions", where);
    if (!actions.is_array()) {
      throw GameFormatError(where + " 'actions' must be an array");
    }
    std::vector<std::pair<std::vector<std::string>, std::string>> children;
    for (const Json& aj : actions) {
      RejectUnknown(aj, {"profile", "child"}, where + " action");
      const Json& prof = Require(aj, "profile", where + " action");
      std::vector<std::string> profile;
      if (prof.is_string()) {
        profile.push_back(prof.get<std::string>());
      } else if (prof.is_array()) {
        for (const Json& a : prof) profile.push_back(AsString(a, "action"));
      } else {
        throw GameFormatError(where + " action profile must be an array");
      }
      children.emplace_back(
          std::move(profile),
          AsString(Require(aj, "child", where + " action"), "child id"));
    }
    if (kind == "decision") {
      if (nj.contains("chance_probs")) {
        throw GameFormatError(where + " is a decision node with chance_probs");
      }
      std::vector<std::string> movers;
      const Json& mj = Require(nj, "movers", where);
      if (!mj.is_array()) throw GameFormatError(where + " movers must be array");
      for (const Json& m : mj) movers.push_back(AsString(m, "mover"));
      builder.Decision(id, std::move(movers), std::move(children));
    } else if (kind == "chance") {
      if (nj.contains("movers")) {
        const Json& mj = nj["movers"];
        if (!(mj.is_array() && mj.size() == 1 && mj[0] == kChanceId)) {
          throw GameFormatError(where + ": chance nodes are moved by 'chance' "
                                "only");
        }
      }
      const Json& probs = Require(nj, "chance_probs", where);
      if (!probs.is_object()) {
        throw GameFormatError(where + " chance_probs must be an object");
      }
      std::vector<std::tuple<std::string, Rational, std::string>> outcomes;
      std::set<std::string> listed;
      for (const auto& [profile, child] : children) {
        if (profile.size() != 1) {
          throw GameFormatError(where + ": chance profiles have one action");
        }
        if (!probs.contains(profile[0])) {
          throw GameFormatError(where + " lacks a probability for '" +
                                profile[0] + "'");
        }
        listed.insert(profile[0]);
        outcomes.emplace_back(profile[0],
                              AsRational(probs[profile[0]], where + " prob"),
                              child);
      }
      for (auto it = probs.begin(); it != probs.end(); ++it) {
        if (!listed.count(it.key())) {
          throw GameFormatError(where + " has a probability for unknown "
                                "action '" + it.key() + "'");
        }
      }
      builder.Chance(id, std::move(outcomes));
    } else {
      throw GameFormatError(where + " has unknown kind '" + kind + "'");
    }
  }
  if (doc.contains("info_sets")) {
    const Json& sets = doc["info_sets"];
    if (!sets.is_array()) throw GameFormatError("'info_sets' must be an array");
    int counter = 0;
    for (const Json& sj : sets) {
      RejectUnknown(sj, {"id", "player", "nodes"}, "information set");
      std::string player = AsString(Require(sj, "player", "information set"),
                                    "information set player");
      std::string id = sj.contains("id") ? AsString(sj["id"], "set id")
                                         : "I" + std::to_string(++counter);
      std::vector<std::string> members;
      const Json& nj = Require(sj, "nodes", "information set");
      if (!nj.is_array()) throw GameFormatError("set nodes must be an array");
      for (const Json& m : nj) members.push_back(AsString(m, "node id"));
      builder.InfoSet(id, player, std::move(members));
    }
  }
  return builder.Build();
}

inline Json GameTree::ToJson() const {
  Json doc;
  if (!name_.empty()) doc["name"] = name_;
  if (!caption_.empty()) doc["caption"] = caption_;
  doc["players"] = players_;
  doc["root"] = nodes_[root_].id;
  Json nodes = Json::array();
  for (const Node& nd : nodes_) {
    Json nj;
    nj["id"] = nd.id;
    if (nd.kind == NodeKind::kTerminal) {
      nj["kind"] = "terminal";
      Json pay = Json::object();
      for (int p = 0; p < num_players(); ++p) {
        pay[players_[p]] = FormatRational(nd.payoffs.at(p));
      }
      nj["payoffs"] = pay;
    } else {
      nj["kind"] = nd.kind == NodeKind::kChance ? "chance" : "decision";
      Json movers = Json::array();
      for (int m : nd.movers) {
        movers.push_back(m == kChancePlayer ? std::string(kChanceId)
                                            : players_[m]);
      }
      nj["movers"] = movers;
      Json actions = Json::array();
      for (const Edge& e : nd.edges) {
        Json profile = Json::array();
        for (std::size_t m = 0; m < e.profile.size(); ++m) {
          profile.push_back(nd.actions[m][e.profile[m]]);
        }
        actions.push_back({{"profile", profile}, {"child", nodes_[e.child].id}});
      }
      nj["actions"] = actions;
      if (nd.kind == NodeKind::kChance) {
        Json probs = Json::object();
        for (std::size_t a = 0; a < nd.actions[0].size(); ++a) {
          probs[nd.actions[0][a]] = FormatRational(nd.chance_probs[a]);
        }
        nj["chance_probs"] = probs;
      }
    }
    nodes.push_back(nj);
  }
  doc["nodes"] = nodes;
  Json sets = Json::array();
  for (const InfoSet& info : info_sets_) {
    Json members = Json::array();
    for (int n : info.nodes) members.push_back(nodes_[n].id);
    sets.push_back(
        {{"id", info.id}, {"player", players_[info.player]}, {"nodes", members}});
  }
  doc["info_sets"] = sets;
  return doc;
}

}  // namespace efsolve
