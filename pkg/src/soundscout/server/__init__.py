"""Live WebSocket service and its wire protocol."""
