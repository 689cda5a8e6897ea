package com.toy.data;

public abstract class Entity {
    protected String id;
}
