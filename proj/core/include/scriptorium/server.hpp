#pragma once

#include <memory>
#include <string>
#include <vector>

#include "scriptorium/error.hpp"
#include "scriptorium/workspace.hpp"

namespace scriptorium::api {

/// HTTP status used for an error code.
int http_status(Errc code);

struct RouteInfo {
  std::string method;
  std::string pattern;
  std::string operation;  // per-entity operation number ("i".."xii") or empty
  bool mutation = false;
  bool authenticated = true;
};

/// Every route the server registers, in registration order.
const std::vector<RouteInfo>& routes();

/// JSON encodings shared by the server and the CLI.
std::string entity_to_json(const docs::EntityDocument& doc, const schema::EntityTypeSchema* schema);
std::string time_expression_json(std::string_view expr, const chrono::NormalizeOptions& options = {});

/// `/api/v1` over HTTP. Handlers authenticate the bearer token, then defer
/// every permission decision to the store and services underneath.
class Server {
 public:
  explicit Server(Workspace& workspace);
  ~Server();

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Blocks until stop().
  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and serves on a background thread.
  int start_background(const std::string& host = "127.0.0.1");
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace scriptorium::api
