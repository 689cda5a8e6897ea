package com.toy.service;

import com.toy.data.Customer;
import com.toy.data.CustomerRepository;

public class CustomerService implements Service {
    private final CustomerRepository repository;

    public CustomerService(CustomerRepository repository) {
        this.repository = repository;
    }

    public Customer find(String id) {
        return repository.byId(id);
    }
}
