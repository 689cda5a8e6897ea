package com.toy.service;

import com.toy.data.Order;
import com.toy.data.OrderRepository;
import java.util.ArrayList;
import java.util.List;

public class OrderService implements Service {
    private final OrderRepository repository;

    public OrderService(OrderRepository repository) {
        this.repository = repository;
    }

    public void place(Order order) {
        repository.save(order);
    }

    public List<String> summaries() {
        List<String> out = new ArrayList<>();
        for (Order order : repository.all()) {
            out.add(order.toString());
        }
        return out;
    }
}
