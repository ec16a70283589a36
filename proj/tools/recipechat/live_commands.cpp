#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <pthread.h>

#include "commands.hpp"
#include "recipechat/error.hpp"
#include "recipechat/http_server.hpp"
#include "recipechat/json_io.hpp"
#include "recipechat/service.hpp"

namespace recipechat::cli {

namespace {

RecipeMap read_recipe_files(const std::vector<std::string>& paths) {
  RecipeMap all;
  for (const auto& p : paths) {
    std::ifstream in(p);
    if (!in) throw Error("cannot open " + p);
    for (auto& [id, r] : read_recipes(in)) {
      auto [it, inserted] = all.emplace(id, r);
      if (!inserted && nlohmann::json(it->second) != nlohmann::json(r)) {
        throw ValidationError("recipe id '" + id + "' has conflicting definitions");
      }
    }
  }
  return all;
}

ServiceConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  auto j = read_json_file(path);
  if (j.contains("kind")) j = nlohmann::json{{"backend", j}};
  return service_config_from_json(j);
}

std::pair<std::string, int> split_addr(const std::string& addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) throw ValidationError("--addr must be HOST:PORT");
  const auto host = addr.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(addr.substr(colon + 1));
  } catch (const std::exception&) {
    throw ValidationError("bad port in '" + addr + "'");
  }
  if (port < 0 || port > 65535) throw ValidationError("bad port in '" + addr + "'");
  return {host.empty() ? "0.0.0.0" : host, port};
}

}  // namespace

int run_serve(const ServeArgs& args) {
  const auto [host, port] = split_addr(args.addr);
  ChatService service(read_recipe_files(args.recipes), load_config(args.backend));
  if (!args.snapshot.empty() && std::filesystem::exists(args.snapshot)) {
    service.restore_store(args.snapshot);
    std::cerr << "restored " << service.session_ids().size() << " sessions from " << args.snapshot << '\n';
  }

  std::optional<std::filesystem::path> static_dir;
  if (!args.static_dir.empty()) static_dir = args.static_dir;
  HttpServer server(service, static_dir);

  // Signals go to a dedicated thread that stops the server.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });

  std::cerr << "serving " << service.recipes().size() << " recipes on " << host << ':' << port << '\n';
  const bool ok = server.listen(host, port);
  if (!ok) {
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
    std::cerr << "error: cannot listen on " << args.addr << '\n';
    return 1;
  }
  waiter.join();

  if (!args.snapshot.empty()) {
    service.snapshot_store(args.snapshot);
    std::cerr << "wrote " << args.snapshot << '\n';
  }
  return 0;
}

int run_chat(const ChatArgs& args) {
  ChatService service(read_recipe_files(args.recipes), load_config(args.backend));
  const auto session = service.create_session(args.recipe);
  const auto& recipe = session.recipe;

  std::cout << recipe.title << '\n';
  for (const auto& s : recipe.steps) std::cout << "  " << s.index << ". " << s.text << '\n';
  std::cout << "(/steps to list steps, /quit to leave)\n";

  std::string line;
  while (std::cout << "> " << std::flush, std::getline(std::cin, line)) {
    if (line == "/quit" || line == "/exit") break;
    if (line == "/steps") {
      for (const auto& s : recipe.steps) std::cout << "  " << s.index << ". " << s.text << '\n';
      continue;
    }
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      const auto r = service.post_message(session.id, line, args.debug);
      std::cout << "chef: " << r.reply << '\n';
      std::cout << "  [step " << r.state << "/" << recipe.num_steps();
      if (!r.intents.empty()) {
        std::cout << " | ";
        for (std::size_t i = 0; i < r.intents.size(); ++i) std::cout << (i ? ", " : "") << r.intents[i].name;
      }
      std::cout << "]\n";
      if (r.warning) std::cout << "  warning: " << *r.warning << '\n';
      if (r.debug) {
        std::cout << "  prompt: " << r.debug->prompt << "\n  scores:";
        for (double s : r.debug->scores) std::cout << ' ' << fixed(s, 3);
        std::cout << '\n';
      }
    } catch (const BackendError& e) {
      std::cout << "  backend error: " << e.what() << " (message dropped, try again)\n";
    }
  }
  return 0;
}

}  // namespace recipechat::cli
